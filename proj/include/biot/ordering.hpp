#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "biot/sparse.hpp"

namespace biot {

enum class OrderingMethod { automatic, amd, nested_dissection, natural };

std::string_view ordering_name(OrderingMethod m);

/// Elimination orders: result[new] = old. Only the pattern of k is used,
/// which must be structurally symmetric.
std::vector<int> amd_ordering(const CsrMatrix& k);
std::vector<int> nested_dissection_ordering(const CsrMatrix& k, int leaf_size = 128);
/// `automatic` keeps whichever of AMD and nested dissection predicts less fill.
std::vector<int> fill_reducing_ordering(const CsrMatrix& k, OrderingMethod method = OrderingMethod::automatic);

/// Strictly lower nonzeros of the Cholesky factor of the reordered pattern.
std::size_t cholesky_fill(const CsrMatrix& k, std::span<const int> order);

}  // namespace biot
