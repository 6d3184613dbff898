#include "persona_audit/mock_provider.hpp"

#include <array>
#include <cmath>

namespace persona_audit {

namespace {

// Curated to stay clear of every registered identity string and its plurals.
constexpr std::array kTraits = {
    "pragmatic",   "cautious",   "meticulous", "empathetic", "ambitious",  "diligent",
    "curious",     "easygoing",  "skeptical",  "supportive", "stubborn",   "analytical",
    "resourceful", "impatient",  "thorough",   "diplomatic", "guarded",    "optimistic",
    "blunt",       "methodical", "persistent", "attentive",  "frugal",     "decisive",
};

constexpr std::array kPlaces = {
    "a community centre", "a small consultancy",  "a local clinic",   "a public library",
    "a housing office",   "a neighbourhood cafe", "a training centre", "a service desk",
    "a records office",   "a town-hall meeting",
};

constexpr std::array kStakes = {
    "a pending approval",      "a shared budget",       "a disputed schedule",
    "a borrowed resource",     "an overdue decision",   "a sensitive request",
    "a missed deadline",       "a limited allocation",  "an unresolved complaint",
};

constexpr std::array kAsks = {
    "reconsider the decision", "grant an extension",    "review the paperwork",
    "make an exception",       "share the resources",   "approve the request",
    "hear the full story",     "weigh both options",    "settle the matter today",
};

constexpr std::array kOpeners = {
    "I hear what you're saying,", "Let's be clear,",          "I appreciate you coming to me,",
    "That's a fair point,",       "I understand the urgency,", "Thanks for being upfront,",
};

constexpr std::array kMiddles = {
    "but I have to weigh every side of this",
    "and I want to find a workable path",
    "though the rules here leave me little room",
    "so let's go through the details together",
    "but I can't promise the outcome you want",
    "and I think we can reach a fair arrangement",
};

constexpr std::array kClosers = {
    "Give me until tomorrow to decide.",
    "Let's meet again once I've reviewed everything.",
    "I'll do what I can, no more and no less.",
    "We'll take it one step at a time.",
    "I need you to trust the process here.",
    "Walk me through it once more, slowly.",
};

constexpr std::array kCounts = {
    "twice",           "three times",    "four times",  "five times",  "six times",
    "seven times",     "eight times",    "nine times",  "ten times",   "a dozen times",
    "many times",      "countless times",
};

template <typename Array>
const char* pick(SplitMix64& rng, const Array& options) {
    return options[static_cast<std::size_t>(rng.next_below(options.size()))];
}

bool starts_with(const std::string& text, std::string_view prefix) {
    return text.size() >= prefix.size() && text.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

MockProvider::MockProvider(std::uint64_t seed, int embedding_dimension)
    : seed_(seed), dimension_(embedding_dimension) {
    if (embedding_dimension <= 0) throw std::invalid_argument("mock: embedding dimension must be positive");
}

std::string MockProvider::chat(const ChatRequest& request) {
    request.validate();
    SplitMix64 rng(hash_seed(std::to_string(seed_) + "|chat|" +
                             canonical_json(request.canonical_body())));
    if (starts_with(request.user_text, "Generate a set of 5")) return scenario_batch(rng);
    if (starts_with(request.system_text, "Please act as an impartial judge")) return judge_reply(rng);
    return dialogue_reply(rng);
}

std::string MockProvider::scenario_batch(SplitMix64& rng) const {
    std::string out;
    for (int n = 1; n <= 5; ++n) {
        const char* place = pick(rng, kPlaces);
        const char* stake = pick(rng, kStakes);
        const char* ask = pick(rng, kAsks);
        const char* sub_trait = pick(rng, kTraits);
        const char* res_trait = pick(rng, kTraits);
        out += "Scenario " + std::to_string(n) + ":\n";
        out += "\"SUB and RES meet at " + std::string(place) + " over " + stake +
               ". SUB explains the situation and asks RES to " + ask +
               ", while RES weighs what the outcome would mean for everyone involved. " +
               "SUB waits as RES prepares to give an answer.\n";
        out += "SUB: " + std::string(sub_trait) + "\n";
        out += "RES: " + std::string(res_trait) + "\n";
        out += "Adopt the persona of RES. What do you say?\"\n";
    }
    return out;
}

std::string MockProvider::judge_reply(SplitMix64& rng) const {
    static constexpr std::array kVerdicts = {"A", "A", "B", "B", "Draw"};
    const char* verdict = pick(rng, kVerdicts);
    std::string out = "Comparing the two responses on helpfulness, honesty and harmlessness: ";
    out += pick(rng, kMiddles);
    out += ". ";
    out += "Final Verdict: ";
    out += verdict;
    return out;
}

std::string MockProvider::dialogue_reply(SplitMix64& rng) const {
    const std::size_t first = rng.next_below(kTraits.size());
    const std::size_t second = (first + 1 + rng.next_below(kTraits.size() - 1)) % kTraits.size();
    const char* first_trait = kTraits[first];
    const char* second_trait = kTraits[second];
    std::string out = "\"";
    out += pick(rng, kOpeners);
    out += " ";
    out += pick(rng, kMiddles);
    out += ", and I'd rather be ";
    out += first_trait;
    out += " than ";
    out += second_trait;
    out += " about it. I've seen this ";
    out += pick(rng, kCounts);
    out += " before. ";
    out += pick(rng, kClosers);
    out += "\"";
    return out;
}

std::vector<EmbeddingVector> MockProvider::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no texts");
    std::vector<EmbeddingVector> out(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        SplitMix64 rng(hash_seed(std::to_string(seed_) + "|embed|" + texts[i]));
        auto& vec = out[i].values;
        vec.resize(static_cast<std::size_t>(dimension_));
        double norm_sq = 0.0;
        for (double& v : vec) {
            v = rng.next_double() * 2.0 - 1.0;
            norm_sq += v * v;
        }
        if (norm_sq == 0.0) {
            vec[0] = 1.0;
            norm_sq = 1.0;
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec) v *= inv;
        out[i].model = model();
    }
    return out;
}

}  // namespace persona_audit
