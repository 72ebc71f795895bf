#pragma once

// Umbrella header.

#include "medwit/config.hpp"
#include "medwit/correlations.hpp"
#include "medwit/decoherence.hpp"
#include "medwit/dense.hpp"
#include "medwit/experiment.hpp"
#include "medwit/hamiltonians.hpp"
#include "medwit/pauli_algebra.hpp"
#include "medwit/report_io.hpp"
#include "medwit/runner.hpp"
#include "medwit/system_layout.hpp"
#include "medwit/verify.hpp"
#include "medwit/version.hpp"
#include "medwit/witness.hpp"
