#pragma once

#include "topochain/bloch.hpp"
#include "topochain/config.hpp"
#include "topochain/driven.hpp"
#include "topochain/errors.hpp"
#include "topochain/io.hpp"
#include "topochain/lattice.hpp"
#include "topochain/linalg.hpp"
#include "topochain/parallel.hpp"
#include "topochain/scattering.hpp"
#include "topochain/spectrum.hpp"
#include "topochain/trace.hpp"
