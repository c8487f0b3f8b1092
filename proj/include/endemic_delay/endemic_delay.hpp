#pragma once

#include "endemic_delay/harness.hpp"
#include "endemic_delay/integrators.hpp"
#include "endemic_delay/io.hpp"
#include "endemic_delay/kernels.hpp"
#include "endemic_delay/model.hpp"
#include "endemic_delay/reference.hpp"
#include "endemic_delay/trajectory.hpp"
