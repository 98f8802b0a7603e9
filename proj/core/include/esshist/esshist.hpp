#pragma once

#include "esshist/bounds.hpp"
#include "esshist/classical.hpp"
#include "esshist/densities.hpp"
#include "esshist/documents.hpp"
#include "esshist/dp.hpp"
#include "esshist/errors.hpp"
#include "esshist/evaluate.hpp"
#include "esshist/histogram.hpp"
#include "esshist/inference.hpp"
#include "esshist/intervals.hpp"
#include "esshist/metrics.hpp"
#include "esshist/multiscale.hpp"
#include "esshist/quantiles.hpp"
#include "esshist/sample.hpp"
