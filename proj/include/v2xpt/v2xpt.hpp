#pragma once

#include "v2xpt/bits.hpp"
#include "v2xpt/channel/apply.hpp"
#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/channel/fading.hpp"
#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/frame/bit_rate.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/crc32.hpp"
#include "v2xpt/frame/data_unit.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/rx/demod.hpp"
#include "v2xpt/rx/estimation.hpp"
#include "v2xpt/rx/receiver.hpp"
#include "v2xpt/rx/seed.hpp"
#include "v2xpt/rx/viterbi.hpp"
#include "v2xpt/sim/config.hpp"
#include "v2xpt/sim/output.hpp"
#include "v2xpt/sim/rng.hpp"
#include "v2xpt/sim/runner.hpp"
#include "v2xpt/sim/stats.hpp"
#include "v2xpt/tx/conv_code.hpp"
#include "v2xpt/tx/grid_io.hpp"
#include "v2xpt/tx/interleaver.hpp"
#include "v2xpt/tx/mapper.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/ofdm_modulator.hpp"
#include "v2xpt/tx/puncture.hpp"
#include "v2xpt/tx/scrambler.hpp"
#include "v2xpt/tx/signal_field.hpp"
#include "v2xpt/tx/transmitter.hpp"
