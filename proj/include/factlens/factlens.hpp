#pragma once

#include "factlens/analysis/agreement.hpp"
#include "factlens/analysis/binning.hpp"
#include "factlens/analysis/classification.hpp"
#include "factlens/analysis/correlation.hpp"
#include "factlens/analysis/logistic.hpp"
#include "factlens/analysis/summary.hpp"
#include "factlens/cache.hpp"
#include "factlens/config.hpp"
#include "factlens/core.hpp"
#include "factlens/dataset.hpp"
#include "factlens/decomposer.hpp"
#include "factlens/error.hpp"
#include "factlens/eval_ensemble.hpp"
#include "factlens/eval_llm.hpp"
#include "factlens/eval_statistical.hpp"
#include "factlens/extraction.hpp"
#include "factlens/http_provider.hpp"
#include "factlens/pipeline.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/report.hpp"
#include "factlens/results.hpp"
#include "factlens/similarity.hpp"
#include "factlens/text.hpp"
#include "factlens/verifier.hpp"
