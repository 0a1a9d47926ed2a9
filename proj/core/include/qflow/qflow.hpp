#pragma once

#include "qflow/channel_io.hpp"
#include "qflow/channels.hpp"
#include "qflow/errors.hpp"
#include "qflow/flowmetrics.hpp"
#include "qflow/linalg.hpp"
#include "qflow/mpo.hpp"
#include "qflow/network.hpp"
#include "qflow/tensor.hpp"
#include "qflow/zoo.hpp"
