#pragma once

// Umbrella header for the lahja dialect-identification library.

#include "lahja/corpus.hpp"
#include "lahja/errors.hpp"
#include "lahja/experiment.hpp"
#include "lahja/math.hpp"
#include "lahja/meta.hpp"
#include "lahja/metrics.hpp"
#include "lahja/models.hpp"
#include "lahja/rng.hpp"
#include "lahja/serialize.hpp"
#include "lahja/textproc.hpp"
#include "lahja/toml.hpp"
#include "lahja/utf8.hpp"
#include "lahja/vectorize.hpp"
