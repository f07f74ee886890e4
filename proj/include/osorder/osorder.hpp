#pragma once

// Umbrella header.

#include "osorder/specfun.hpp"
#include "osorder/quadrature.hpp"
#include "osorder/refdist.hpp"
#include "osorder/orderstat.hpp"
#include "osorder/shape.hpp"
#include "osorder/conditions.hpp"
#include "osorder/ssverify.hpp"
#include "osorder/bounds.hpp"
#include "osorder/oracle.hpp"
#include "osorder/report_json.hpp"
