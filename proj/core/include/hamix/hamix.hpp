#pragma once

#include "hamix/audio_buffer.hpp"
#include "hamix/batch.hpp"
#include "hamix/convolution.hpp"
#include "hamix/crosstalk.hpp"
#include "hamix/decibel.hpp"
#include "hamix/dynamics.hpp"
#include "hamix/error.hpp"
#include "hamix/hearing.hpp"
#include "hamix/loudness.hpp"
#include "hamix/metrics.hpp"
#include "hamix/pipeline.hpp"
#include "hamix/report.hpp"
#include "hamix/stems.hpp"
#include "hamix/wav.hpp"
