#pragma once

// Everything at once.

#include "fracharm/errors.hpp"
#include "fracharm/grid.hpp"
#include "fracharm/field.hpp"
#include "fracharm/fft.hpp"
#include "fracharm/spectral.hpp"
#include "fracharm/random_field.hpp"
#include "fracharm/littlewood_paley.hpp"
#include "fracharm/lemmas.hpp"
#include "fracharm/norms.hpp"
#include "fracharm/grassmann.hpp"
#include "fracharm/manifold.hpp"
#include "fracharm/sample_maps.hpp"
#include "fracharm/commutators.hpp"
#include "fracharm/taylor.hpp"
#include "fracharm/harmonic_flow.hpp"
#include "fracharm/potential_system.hpp"
#include "fracharm/estimates.hpp"
#include "fracharm/snapshot.hpp"
#include "fracharm/suite.hpp"
