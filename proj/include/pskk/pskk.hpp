#pragma once

// Umbrella header for the PSKK density estimation library.

#include "pskk/bernoulli.hpp"
#include "pskk/csv.hpp"
#include "pskk/errors.hpp"
#include "pskk/estimator.hpp"
#include "pskk/fft.hpp"
#include "pskk/kde.hpp"
#include "pskk/kernel.hpp"
#include "pskk/lattice.hpp"
#include "pskk/mise.hpp"
#include "pskk/mixture.hpp"
#include "pskk/parallel.hpp"
#include "pskk/plot.hpp"
#include "pskk/points.hpp"
#include "pskk/primes.hpp"
#include "pskk/rng.hpp"
#include "pskk/sobol.hpp"
