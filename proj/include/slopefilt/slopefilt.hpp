#pragma once

#include "slopefilt/error.hpp"
#include "slopefilt/rational.hpp"
#include "slopefilt/poly.hpp"
#include "slopefilt/matrix.hpp"
#include "slopefilt/lattice.hpp"
#include "slopefilt/group_model.hpp"
#include "slopefilt/chain.hpp"
#include "slopefilt/verify.hpp"
#include "slopefilt/gamma_sets.hpp"
#include "slopefilt/base_locus.hpp"
#include "slopefilt/config.hpp"
#include "slopefilt/report.hpp"
#include "slopefilt/cli.hpp"
