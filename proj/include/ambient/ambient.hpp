#pragma once

// Umbrella header for the ambient calculus workbench.

#include "ambient/names.hpp"
#include "ambient/term.hpp"
#include "ambient/congruence.hpp"
#include "ambient/eta.hpp"
#include "ambient/frozen.hpp"
#include "ambient/measure.hpp"
#include "ambient/parse.hpp"
#include "ambient/print.hpp"
#include "ambient/semantics.hpp"
#include "ambient/equivalence.hpp"
#include "ambient/logic.hpp"
#include "ambient/logic_syntax.hpp"
#include "ambient/distinguish.hpp"
#include "ambient/turing.hpp"
