#pragma once

#include "canonical.hpp"
#include "document.hpp"
#include "error.hpp"
#include "iterative.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"
#include "operator.hpp"
#include "rational.hpp"
#include "solutions.hpp"
#include "transform.hpp"
