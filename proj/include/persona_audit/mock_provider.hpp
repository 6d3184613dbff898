#pragma once

#include <cstdint>

#include "persona_audit/providers.hpp"

namespace persona_audit {

/// Fully offline provider. Every output is a pure function of (seed, request),
/// so identical runs are reproducible bit for bit. The chat side answers by
/// request shape: scenario-generation prompts get a five-block batch in the
/// expected output grammar, judge prompts get a short rationale ending in a
/// final verdict, anything else gets a quoted line of dialogue. Embeddings
/// are unit vectors derived from the text hash.
class MockProvider : public ChatProvider, public EmbeddingProvider {
  public:
    explicit MockProvider(std::uint64_t seed, int embedding_dimension = 768);

    std::string chat(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    int dimension() const override { return dimension_; }
    std::string model() const override { return "mock-embed"; }

    std::uint64_t seed() const { return seed_; }

  private:
    std::string scenario_batch(SplitMix64& rng) const;
    std::string judge_reply(SplitMix64& rng) const;
    std::string dialogue_reply(SplitMix64& rng) const;

    std::uint64_t seed_;
    int dimension_;
};

}  // namespace persona_audit
