#pragma once

#include "meso/decomposition.hpp"
#include "meso/exponent.hpp"
#include "meso/json_io.hpp"
#include "meso/lattice.hpp"
#include "meso/localization.hpp"
#include "meso/monomial_order.hpp"
#include "meso/normal_form.hpp"
#include "meso/posets.hpp"
#include "meso/presentation.hpp"
#include "meso/rewriting.hpp"
#include "meso/witnesses.hpp"
