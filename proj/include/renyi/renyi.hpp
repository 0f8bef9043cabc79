// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "renyi/asymptotics.hpp"
#include "renyi/coding.hpp"
#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"
#include "renyi/guessing.hpp"
#include "renyi/json_io.hpp"
#include "renyi/random.hpp"
#include "renyi/smooth_entropy.hpp"
