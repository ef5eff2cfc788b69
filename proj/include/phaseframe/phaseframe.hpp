#pragma once

#include "phaseframe/error.hpp"
#include "phaseframe/fock.hpp"
#include "phaseframe/spectral.hpp"
#include "phaseframe/exact_recon.hpp"
#include "phaseframe/partial_recon.hpp"
#include "phaseframe/oracle.hpp"
#include "phaseframe/error_analysis.hpp"
#include "phaseframe/random.hpp"
#include "phaseframe/io.hpp"
