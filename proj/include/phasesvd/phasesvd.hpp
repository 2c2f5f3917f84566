#pragma once

// Umbrella header for the phasesvd library: dense complex matrices, a
// Hermitian Jacobi eigensolver, the phase-consistent SVD, Schmidt
// decomposition of bipartite states, and the text/JSON formats.

#include "phasesvd/complex_matrix.hpp"
#include "phasesvd/errors.hpp"
#include "phasesvd/hermitian_eigen.hpp"
#include "phasesvd/io.hpp"
#include "phasesvd/phase_svd.hpp"
#include "phasesvd/schmidt.hpp"
