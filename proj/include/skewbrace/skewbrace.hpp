#pragma once

#include "skewbrace/arith.hpp"
#include "skewbrace/brace.hpp"
#include "skewbrace/brace_io.hpp"
#include "skewbrace/cyclotomic.hpp"
#include "skewbrace/error.hpp"
#include "skewbrace/gamma.hpp"
#include "skewbrace/holomorph.hpp"
#include "skewbrace/morphisms.hpp"
#include "skewbrace/parallel.hpp"
#include "skewbrace/pgroup.hpp"
