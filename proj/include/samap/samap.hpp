#ifndef SAMAP_SAMAP_HPP
#define SAMAP_SAMAP_HPP

#include "samap/banded.hpp"
#include "samap/cd2d.hpp"
#include "samap/dense.hpp"
#include "samap/error.hpp"
#include "samap/experiment.hpp"
#include "samap/matrix_market.hpp"
#include "samap/patterns.hpp"
#include "samap/recipe.hpp"
#include "samap/sam.hpp"
#include "samap/sequence.hpp"
#include "samap/shifted.hpp"
#include "samap/sparse.hpp"

#endif // SAMAP_SAMAP_HPP
