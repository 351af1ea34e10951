#pragma once

#include "qmink/boundary.hpp"
#include "qmink/chart.hpp"
#include "qmink/cloud.hpp"
#include "qmink/io.hpp"
#include "qmink/oracle.hpp"
#include "qmink/parallel.hpp"
#include "qmink/product.hpp"
#include "qmink/quat.hpp"
#include "qmink/rng.hpp"
#include "qmink/sample.hpp"
#include "qmink/sets.hpp"
