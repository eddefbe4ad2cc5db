#pragma once

#include "hfsys/constructions.hpp"

#include <random>

namespace hfsys::test
{
using hfsys::random_bumps;
using hfsys::random_pair;
using hfsys::random_radial;
}  // namespace hfsys::test
