#pragma once

#include "dqca/kernels.hpp"

namespace dqca::kernels {

const Ops& scalar_ops();
#ifdef DQCA_HAVE_AVX2
const Ops& avx2_ops();
#endif

} // namespace dqca::kernels
