#pragma once

#include "cybersim/buyer.hpp"
#include "cybersim/config.hpp"
#include "cybersim/error.hpp"
#include "cybersim/golden.hpp"
#include "cybersim/money.hpp"
#include "cybersim/naic.hpp"
#include "cybersim/parallel.hpp"
#include "cybersim/reinsurance.hpp"
#include "cybersim/report.hpp"
#include "cybersim/scenarios.hpp"
#include "cybersim/stochastic.hpp"
#include "cybersim/underwriting.hpp"
