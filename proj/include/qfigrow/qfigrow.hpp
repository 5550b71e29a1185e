// Umbrella header pulling in every module of the toolkit.

#pragma once

#include "core/complex_matrix.hpp"
#include "core/density.hpp"
#include "core/hermitian_eig.hpp"
#include "core/matrix_exp.hpp"
#include "core/random_gen.hpp"
#include "core/tensor.hpp"

#include "dynamics/lindblad.hpp"
#include "dynamics/model.hpp"
#include "dynamics/propagate.hpp"
#include "dynamics/random_model.hpp"

#include "fisher/rates.hpp"
#include "fisher/sld.hpp"

#include "bounds/curves.hpp"
#include "bounds/lambert.hpp"
#include "bounds/rate_bound.hpp"
#include "bounds/span.hpp"

#include "scenarios/oscillator.hpp"
#include "scenarios/protocols.hpp"
#include "scenarios/qubit.hpp"

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/selftest.hpp"
#include "cli/svg.hpp"
