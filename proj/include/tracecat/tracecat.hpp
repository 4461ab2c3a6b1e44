#pragma once

#include "tracecat/async_system.hpp"
#include "tracecat/diagram.hpp"
#include "tracecat/error.hpp"
#include "tracecat/io.hpp"
#include "tracecat/monoid_category.hpp"
#include "tracecat/saturation.hpp"
#include "tracecat/state_space.hpp"
#include "tracecat/trace.hpp"
