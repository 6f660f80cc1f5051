#pragma once

#include "entspec/cli.hpp"
#include "entspec/complex_matrix.hpp"
#include "entspec/criteria.hpp"
#include "entspec/eigensolver.hpp"
#include "entspec/errors.hpp"
#include "entspec/majorization.hpp"
#include "entspec/report.hpp"
#include "entspec/rng.hpp"
#include "entspec/state_io.hpp"
#include "entspec/states.hpp"
#include "entspec/version.hpp"
