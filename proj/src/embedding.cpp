// SPDX-License-Identifier: Apache-2.0
#include "cweseed/embedding.hpp"

#include "cweseed/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

namespace cweseed::metrics {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

bool is_token_char(unsigned char c) {
    return std::isalnum(c) || c == '_';
}

} // namespace

TokenFrequencyEmbedder::TokenFrequencyEmbedder(std::size_t dimension)
    : dimension_(dimension) {}

std::vector<double> TokenFrequencyEmbedder::embed(std::string_view text) const {
    std::vector<double> vec(dimension_, 0.0);
    std::uint64_t h = kFnvOffset;
    bool in_token = false;
    auto flush = [&] {
        if (in_token) {
            vec[h % dimension_] += 1.0;
            h = kFnvOffset;
            in_token = false;
        }
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            h ^= static_cast<std::uint64_t>(std::tolower(c));
            h *= kFnvPrime;
            in_token = true;
        } else {
            flush();
        }
    }
    flush();
    return vec;
}

double semantic_drift(std::string_view a, std::string_view b,
                      const EmbeddingProvider& embedder) {
    std::vector<double> va = embedder.embed(a);
    std::vector<double> vb = embedder.embed(b);
    if (va.size() != embedder.dimension() || vb.size() != embedder.dimension()) {
        throw Error("DimensionMismatch",
                    "embedding provider returned a vector of unexpected size");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 && nb == 0.0) {
        return 0.0;
    }
    if (na == 0.0 || nb == 0.0) {
        return 1.0;
    }
    double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
    if (cosine > 1.0) cosine = 1.0; // guard accumulated rounding
    if (cosine < 0.0) cosine = 0.0;
    return 1.0 - cosine;
}

} // namespace cweseed::metrics
