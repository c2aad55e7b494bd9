#include "fas/compositions.hpp"

#include <stdexcept>

namespace fas {

std::vector<int> eta_signature(const std::vector<int>& q_vec, int K, int N) {
    if ((int)q_vec.size() != N)
        throw std::invalid_argument("eta_signature: q_vec must have length N");
    if (K < 1 || K > N)
        throw std::invalid_argument("eta_signature: K out of range");
    std::vector<int> eta((size_t)(N - K + 1));
    int s = 0;
    for (int k = 0; k < K; ++k) s += q_vec[(size_t)k];
    eta[0] = K + s;
    for (int k = K; k < N; ++k) eta[(size_t)(k - K + 1)] = q_vec[(size_t)k] + 1;
    return eta;
}

} // namespace fas
