#pragma once

#include "qnet/analytics.hpp"
#include "qnet/errors.hpp"
#include "qnet/herald.hpp"
#include "qnet/interferometers.hpp"
#include "qnet/photonics.hpp"
#include "qnet/states.hpp"
