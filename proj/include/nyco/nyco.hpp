#pragma once

#include "nyco/coherence.hpp"
#include "nyco/eig.hpp"
#include "nyco/experiment.hpp"
#include "nyco/kernel.hpp"
#include "nyco/matrix.hpp"
#include "nyco/nystrom.hpp"
#include "nyco/qr.hpp"
#include "nyco/rng.hpp"
#include "nyco/synth.hpp"
