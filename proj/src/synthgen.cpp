#include "hoplink/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hoplink/errors.hpp"
#include "hoplink/parallel.hpp"

namespace hoplink {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

void GenSpec::validate() const {
    if (k < 2) throw SpecError("generator needs k >= 2 datasets");
    if (p < 1) throw SpecError("generator needs p >= 1 patterns");
    if (!is_probability(clique_prob)) throw SpecError("clique_prob must lie in [0, 1]");
    if (!is_probability(background_rate)) throw SpecError("background_rate must lie in [0, 1]");
    if (!is_probability(noise_flip_prob)) throw SpecError("noise_flip_prob must lie in [0, 1]");
    if (count_min < 1 || count_max < count_min) throw SpecError("count range must satisfy 1 <= min <= max");
    if (background_rate > 0.0 && (background_max < 1 || background_max >= count_min)) {
        throw SpecError("background_max must satisfy 1 <= background_max < count_min");
    }
    for (const auto& clique : cliques) {
        std::vector<std::size_t> members = clique;
        std::ranges::sort(members);
        const auto dup = std::ranges::unique(members);
        members.erase(dup.begin(), dup.end());
        if (members.size() < 2) throw SpecError("a clique needs at least two distinct datasets");
        if (members.back() >= k) {
            throw SpecError("clique member " + dataset_label(members.back()) + " exceeds k=" +
                            std::to_string(k));
        }
    }
}

std::string dataset_label(std::size_t index) { return "k" + std::to_string(index + 1); }

std::vector<std::string> default_labels(std::size_t k) {
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t i = 0; i < k; ++i) labels.push_back(dataset_label(i));
    return labels;
}

std::vector<std::size_t> parse_clique(std::string_view text) {
    std::vector<std::size_t> members;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view token = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty() && (token.front() == 'k' || token.front() == 'K')) token.remove_prefix(1);
        std::size_t number = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || number == 0) {
            throw SpecError("bad dataset label '" + std::string(token) + "' (expected k1, k2, ...)");
        }
        members.push_back(number - 1);
    }
    std::ranges::sort(members);
    const auto dup = std::ranges::unique(members);
    members.erase(dup.begin(), dup.end());
    if (members.size() < 2) throw SpecError("a clique needs at least two distinct datasets");
    return members;
}

UsageMatrix generate_pattern(const GenSpec& spec, std::size_t n) {
    spec.validate();
    std::mt19937_64 rng(derive_seed(spec.seed, n));
    const std::size_t k = spec.k;
    UsageMatrix m(k);

    std::uniform_int_distribution<std::uint64_t> clique_count(spec.count_min, spec.count_max);
    const auto c = static_cast<double>(clique_count(rng));
    std::bernoulli_distribution clique_active(spec.clique_prob);
    std::vector<bool> is_clique_link(link_count(k), false);
    std::size_t clique_links = 0;
    for (const auto& clique : spec.cliques) {
        if (!clique_active(rng)) continue;
        for (std::size_t a = 0; a < clique.size(); ++a) {
            for (std::size_t b = a + 1; b < clique.size(); ++b) {
                const std::size_t i = std::min(clique[a], clique[b]);
                const std::size_t j = std::max(clique[a], clique[b]);
                if (i == j) continue;
                const std::size_t idx = pair_index(i, j, k);
                if (!is_clique_link[idx]) {
                    is_clique_link[idx] = true;
                    ++clique_links;
                }
                m.set_pair(i, j, c);
            }
        }
    }

    std::bernoulli_distribution background(spec.background_rate);
    std::vector<Link> noise;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (!is_clique_link[pair_index(i, j, k)] && background(rng)) noise.push_back({i, j});
        }
    }
    if (noise.size() > clique_links) {
        std::ranges::shuffle(noise, rng);
        noise.resize(clique_links);
        std::ranges::sort(noise);
    }
    std::uniform_int_distribution<std::uint64_t> background_count(1, std::max<std::uint64_t>(spec.background_max, 1));
    for (const auto& l : noise) m.set_pair(l.i, l.j, static_cast<double>(background_count(rng)));

    if (m.has_usage()) {
        const BipolarPattern bits = binarize(normalize(m));
        for (std::size_t idx = 0; idx < bits.size(); ++idx) {
            if ((bits[idx] == 1) != is_clique_link[idx]) {
                throw std::logic_error("generated usage matrix violates the clique/background separation");
            }
        }
    }
    return m;
}

std::vector<UsageMatrix> generate_patterns(const GenSpec& spec) {
    spec.validate();
    std::vector<UsageMatrix> out;
    out.reserve(spec.p);
    for (std::size_t n = 0; n < spec.p; ++n) out.push_back(generate_pattern(spec, n));
    return out;
}

BipolarPattern random_pattern(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<Bit> bits(length);
    for (auto& b : bits) b = coin(rng) ? 1 : -1;
    return BipolarPattern(std::move(bits));
}

BipolarPattern perturb(const BipolarPattern& p, double flip_prob, std::uint64_t seed) {
    if (!is_probability(flip_prob)) throw DomainError("flip probability must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(flip_prob);
    BipolarPattern out = p;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (flip(rng)) out.flip(i);
    }
    return out;
}

BipolarPattern generate_dissimilar(const BipolarPattern& reference, double min_distance, std::uint64_t seed) {
    if (!std::isfinite(min_distance) || min_distance <= 0.0 || min_distance > 1.0) {
        throw DomainError("min_distance must lie in (0, 1]");
    }
    const std::size_t n = reference.size();
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<Bit> bits(n);
    for (auto& b : bits) b = coin(rng) ? 1 : -1;
    BipolarPattern out(std::move(bits));

    // Smallest distance d with d / n >= min_distance, evaluated in the same
    // floating arithmetic callers use to check it.
    auto required = static_cast<std::size_t>(std::floor(min_distance * static_cast<double>(n)));
    while (static_cast<double>(required) / static_cast<double>(n) < min_distance) ++required;

    const std::size_t current = hamming_distance(out, reference);
    if (current < required) {
        std::vector<std::size_t> agreeing;
        for (std::size_t i = 0; i < n; ++i) {
            if (out[i] == reference[i]) agreeing.push_back(i);
        }
        std::ranges::shuffle(agreeing, rng);
        for (std::size_t t = 0; t < required - current; ++t) out.flip(agreeing[t]);
    }
    return out;
}

}  // namespace hoplink
