#pragma once

// Umbrella header for the Skellam/Markov approximation toolkit.

#include "skellam/bessel.hpp"
#include "skellam/bounds.hpp"
#include "skellam/chain.hpp"
#include "skellam/components.hpp"
#include "skellam/counter_rng.hpp"
#include "skellam/io.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/markov_exact.hpp"
#include "skellam/norms.hpp"
#include "skellam/series.hpp"
#include "skellam/skellam_dist.hpp"
