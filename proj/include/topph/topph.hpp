#ifndef TOPPH_TOPPH_HPP
#define TOPPH_TOPPH_HPP

#include "topph/analysis.hpp"
#include "topph/csr.hpp"
#include "topph/distribution.hpp"
#include "topph/experiment.hpp"
#include "topph/generators.hpp"
#include "topph/hmm.hpp"
#include "topph/matrix.hpp"
#include "topph/model_io.hpp"
#include "topph/top_p_hmm.hpp"

#endif  // TOPPH_TOPPH_HPP
