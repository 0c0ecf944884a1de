#pragma once

#include "mfarb/arbitrage.hpp"
#include "mfarb/errors.hpp"
#include "mfarb/geometry.hpp"
#include "mfarb/lp.hpp"
#include "mfarb/market.hpp"
#include "mfarb/measures.hpp"
#include "mfarb/oracle.hpp"
#include "mfarb/rational.hpp"
#include "mfarb/splitter.hpp"
