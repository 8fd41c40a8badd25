#ifndef MSMFE_MSMFE_HPP
#define MSMFE_MSMFE_HPP

// Umbrella header for the multipoint stress mixed finite element library.

#include "msmfe/assembly.hpp"
#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/harness.hpp"
#include "msmfe/io.hpp"
#include "msmfe/linsolve.hpp"
#include "msmfe/material.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/parallel.hpp"
#include "msmfe/polynomial.hpp"
#include "msmfe/quadrature.hpp"
#include "msmfe/reduction.hpp"
#include "msmfe/ref_elements.hpp"
#include "msmfe/solver.hpp"
#include "msmfe/sparse.hpp"
#include "msmfe/tensor.hpp"
#include "msmfe/verification.hpp"

#endif  // MSMFE_MSMFE_HPP
