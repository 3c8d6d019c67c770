#pragma once

// Umbrella header for the sarcaug library.

#include "sarcaug/augment.hpp"
#include "sarcaug/classify.hpp"
#include "sarcaug/corpus.hpp"
#include "sarcaug/embeddings.hpp"
#include "sarcaug/errors.hpp"
#include "sarcaug/experiment.hpp"
#include "sarcaug/metrics.hpp"
#include "sarcaug/numeric.hpp"
#include "sarcaug/preprocess.hpp"
#include "sarcaug/rng.hpp"
