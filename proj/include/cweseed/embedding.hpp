// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace cweseed::metrics {

/// Text -> fixed-dimension real vector. Implementations must be pure:
/// the same text always yields the same vector.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Hashed bag-of-tokens term-frequency embedder. Tokens are maximal
/// [A-Za-z0-9_] runs, lowercased; each token increments the bucket
/// FNV-1a-64(token) mod dimension. Deterministic and dependency free;
/// all components are nonnegative, so cosine against it lies in [0,1].
class TokenFrequencyEmbedder final : public EmbeddingProvider {
public:
    explicit TokenFrequencyEmbedder(std::size_t dimension = 256);
    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    std::size_t dimension_;
};

/// 1 - cosine(e(a), e(b)). Exactly one zero vector -> 1.0; both zero -> 0.0.
/// Throws Error("DimensionMismatch") if the provider breaks its contract.
double semantic_drift(std::string_view a, std::string_view b,
                      const EmbeddingProvider& embedder);

} // namespace cweseed::metrics
