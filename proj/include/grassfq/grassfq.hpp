#pragma once

#include "grassfq/error.hpp"
#include "grassfq/fqlinalg.hpp"
#include "grassfq/gf.hpp"
#include "grassfq/grassmann.hpp"
#include "grassfq/qspecial.hpp"
#include "grassfq/random.hpp"
#include "grassfq/rational.hpp"
#include "grassfq/semiinf.hpp"
#include "grassfq/spectral.hpp"
