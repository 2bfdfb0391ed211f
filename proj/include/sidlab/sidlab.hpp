#pragma once

// Umbrella header.

#include "sidlab/bits.hpp"
#include "sidlab/ccf.hpp"
#include "sidlab/channel.hpp"
#include "sidlab/codec.hpp"
#include "sidlab/framing.hpp"
#include "sidlab/harness.hpp"
#include "sidlab/pipeline.hpp"
#include "sidlab/rng.hpp"
#include "sidlab/sid.hpp"
#include "sidlab/version.hpp"
