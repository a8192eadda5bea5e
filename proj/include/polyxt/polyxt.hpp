#pragma once

#include "polyxt/admissibility.hpp"
#include "polyxt/builder.hpp"
#include "polyxt/errors.hpp"
#include "polyxt/extraction.hpp"
#include "polyxt/factorization.hpp"
#include "polyxt/generator.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/interval.hpp"
#include "polyxt/io.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/nmf3.hpp"
#include "polyxt/parallel.hpp"
#include "polyxt/random.hpp"
#include "polyxt/rational.hpp"
