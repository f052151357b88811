// Umbrella header.
#ifndef NLGREEN_NLGREEN_HPP
#define NLGREEN_NLGREEN_HPP

#include "nlgreen/bench.hpp"
#include "nlgreen/config.hpp"
#include "nlgreen/elliptic.hpp"
#include "nlgreen/expr.hpp"
#include "nlgreen/forcing.hpp"
#include "nlgreen/green.hpp"
#include "nlgreen/membership.hpp"
#include "nlgreen/ode.hpp"
#include "nlgreen/parse.hpp"
#include "nlgreen/quadrature.hpp"
#include "nlgreen/series.hpp"
#include "nlgreen/shorttime.hpp"

#endif  // NLGREEN_NLGREEN_HPP
