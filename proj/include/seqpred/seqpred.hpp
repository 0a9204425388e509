#pragma once

// Umbrella header: sequence predictability over finite-state predictor
// classes. Finite binary sequences and their deterministic operators, Moore
// machines as causal predictors, closure combinators, empirical
// predictability estimation, adversarial synthesis, and experiment drivers.

#include "seqpred/bitseq.hpp"
#include "seqpred/canonical.hpp"
#include "seqpred/combinators.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/estimator.hpp"
#include "seqpred/experiments.hpp"
#include "seqpred/machine.hpp"
#include "seqpred/predictor_class.hpp"
#include "seqpred/rational.hpp"
#include "seqpred/report.hpp"
#include "seqpred/synthesis.hpp"
#include "seqpred/version.hpp"
