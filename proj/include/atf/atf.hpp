#pragma once

// Core library: exact affine arithmetic, diagrams, moves, energy and the mutation walker.

#include "atf/affine.hpp"
#include "atf/diagram.hpp"
#include "atf/energy.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/rational.hpp"
#include "atf/walker.hpp"
