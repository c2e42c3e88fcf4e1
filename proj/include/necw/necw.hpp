#pragma once

#include "necw/bounds.hpp"
#include "necw/construct1.hpp"
#include "necw/construct2.hpp"
#include "necw/decode.hpp"
#include "necw/errors.hpp"
#include "necw/flow.hpp"
#include "necw/gf.hpp"
#include "necw/matrix.hpp"
#include "necw/metric.hpp"
#include "necw/network.hpp"
#include "necw/transfer.hpp"
#include "necw/util.hpp"
