#pragma once

#include "rlnc/bounds.hpp"
#include "rlnc/flowpaths.hpp"
#include "rlnc/galois.hpp"
#include "rlnc/network.hpp"
#include "rlnc/random.hpp"
#include "rlnc/rational.hpp"
#include "rlnc/rlncsim.hpp"
