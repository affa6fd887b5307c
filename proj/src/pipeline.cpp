#include "hoplink/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hoplink/errors.hpp"

namespace hoplink {

namespace {

void check_count(double v) {
    if (!std::isfinite(v)) throw DomainError("usage count is not finite");
    if (v < 0.0) throw DomainError("usage count is negative");
}

void check_size(std::size_t k, std::size_t entries) {
    if (entries != k * k) {
        throw DimensionError("usage matrix with k=" + std::to_string(k) + " needs " +
                             std::to_string(k * k) + " entries, got " + std::to_string(entries));
    }
}

}  // namespace

UsageMatrix::UsageMatrix(std::size_t k) : k_(k), counts_(k * k, 0.0) {}

UsageMatrix UsageMatrix::from_counts(std::size_t k, std::vector<double> counts) {
    check_size(k, counts.size());
    std::ranges::for_each(counts, check_count);
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i * k + i] != 0.0) throw FormatError("usage matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < k; ++j) {
            if (counts[i * k + j] != counts[j * k + i]) throw FormatError("usage matrix is not symmetric");
        }
    }
    UsageMatrix m;
    m.k_ = k;
    m.counts_ = std::move(counts);
    return m;
}

UsageMatrix::Ingested UsageMatrix::ingest(std::size_t k, std::vector<double> counts) {
    check_size(k, counts.size());
    std::ranges::for_each(counts, check_count);
    Ingested out;
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i * k + i] != 0.0) {
            counts[i * k + i] = 0.0;
            ++out.cleared_diagonal;
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            double& upper = counts[i * k + j];
            double& lower = counts[j * k + i];
            if (upper != lower) {
                upper = lower = std::max(upper, lower);
                ++out.healed_pairs;
            }
        }
    }
    out.matrix.k_ = k;
    out.matrix.counts_ = std::move(counts);
    return out;
}

void UsageMatrix::set_pair(std::size_t i, std::size_t j, double value) {
    if (i == j) throw DomainError("usage matrix diagonal is fixed at zero");
    if (i >= k_ || j >= k_) throw DimensionError("usage pair index out of range");
    check_count(value);
    counts_[i * k_ + j] = value;
    counts_[j * k_ + i] = value;
}

bool UsageMatrix::has_usage() const noexcept {
    return std::ranges::any_of(counts_, [](double v) { return v != 0.0; });
}

AssociationSet::AssociationSet(std::size_t k, std::vector<Link> links) : k_(k) {
    for (const auto& l : links) insert(l.i, l.j);
}

void AssociationSet::insert(std::size_t a, std::size_t b) {
    if (a == b) throw DomainError("a link needs two distinct datasets");
    if (a >= k_ || b >= k_) {
        throw DomainError("link (" + std::to_string(a) + "," + std::to_string(b) +
                          ") out of range for k=" + std::to_string(k_));
    }
    const Link l{std::min(a, b), std::max(a, b)};
    const auto it = std::ranges::lower_bound(links_, l);
    if (it == links_.end() || *it != l) links_.insert(it, l);
}

bool AssociationSet::contains(std::size_t a, std::size_t b) const {
    if (a == b) return false;
    return std::ranges::binary_search(links_, Link{std::min(a, b), std::max(a, b)});
}

void ThresholdSpec::validate() const {
    if (!std::isfinite(value)) throw DomainError("threshold value is not finite");
    if (kind == Kind::quantile && (value < 0.0 || value > 1.0)) {
        throw DomainError("threshold quantile must lie in [0, 1]");
    }
}

double frobenius_norm(const UsageMatrix& m) {
    double sum = 0.0;
    for (double v : m.counts()) sum += v * v;
    return std::sqrt(sum);
}

UsageMatrix normalize(const UsageMatrix& m) {
    const double norm = frobenius_norm(m);
    if (norm == 0.0) throw DegenerateInputError("cannot normalise an all-zero usage matrix");
    std::vector<double> out(m.counts().begin(), m.counts().end());
    for (double& v : out) v /= norm;
    return UsageMatrix::from_counts(m.k(), std::move(out));
}

double resolve_threshold(const UsageMatrix& m, const ThresholdSpec& spec) {
    spec.validate();
    if (spec.kind == ThresholdSpec::Kind::absolute) return spec.value;

    std::vector<double> values;
    const std::size_t k = m.k();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (const double v = m.at(i, j); v != 0.0) values.push_back(v);
        }
    }
    if (values.empty()) {
        throw DegenerateInputError("quantile threshold over a matrix without nonzero links");
    }
    std::ranges::sort(values);
    const double pos = spec.value * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    // Clamped so rounding can never push the threshold past the upper order
    // statistic (which would drop an entry equal to it).
    return std::clamp(values[lo] + frac * (values[hi] - values[lo]), values[lo], values[hi]);
}

BipolarPattern binarize(const UsageMatrix& m, const ThresholdSpec& spec) {
    const double theta = resolve_threshold(m, spec);
    const std::size_t k = m.k();
    std::vector<Bit> bits;
    bits.reserve(link_count(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) bits.push_back(m.at(i, j) >= theta ? 1 : -1);
    }
    return BipolarPattern(std::move(bits));
}

BipolarPattern usage_to_pattern(const UsageMatrix& m, const ThresholdSpec& spec) {
    if (!m.has_usage()) return BipolarPattern(link_count(m.k()), -1);
    return binarize(normalize(m), spec);
}

BipolarPattern vectorize(const AssociationSet& assoc) {
    BipolarPattern p(link_count(assoc.k()), -1);
    for (const auto& l : assoc.links()) p.set(pair_index(l.i, l.j, assoc.k()), 1);
    return p;
}

AssociationSet devectorize(const BipolarPattern& p, std::size_t k) {
    if (p.size() != link_count(k)) {
        throw DimensionError("pattern of length " + std::to_string(p.size()) + " does not encode k=" +
                             std::to_string(k) + " (expected " + std::to_string(link_count(k)) + ")");
    }
    AssociationSet out(k);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j, ++idx) {
            if (p[idx] == 1) out.insert(i, j);
        }
    }
    return out;
}

}  // namespace hoplink
