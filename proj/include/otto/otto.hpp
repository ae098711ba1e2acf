#pragma once

#include "otto/errors.hpp"
#include "otto/qcore.hpp"
#include "otto/system.hpp"
#include "otto/lindblad.hpp"
#include "otto/correlations.hpp"
#include "otto/thermo.hpp"
#include "otto/oracle.hpp"
