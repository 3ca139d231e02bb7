// Umbrella header: the whole toolkit.
#pragma once

#include "bo/error.hpp"
#include "bo/fourier.hpp"
#include "bo/lax.hpp"
#include "bo/birkhoff.hpp"
#include "bo/hardy_ops.hpp"
#include "bo/inverse.hpp"
#include "bo/flow.hpp"
#include "bo/direct.hpp"
#include "bo/io.hpp"
#include "bo/experiments.hpp"
