#include "hoplink/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <string>
#include <vector>

#include "hoplink/errors.hpp"

namespace hoplink {

namespace {

void check_same_k(const AssociationSet& a, const AssociationSet& b, const char* what) {
    if (a.k() != b.k()) {
        throw DimensionError(std::string(what) + ": association sets over k=" + std::to_string(a.k()) +
                             " and k=" + std::to_string(b.k()));
    }
}

AssociationSet difference(const AssociationSet& a, const AssociationSet& b) {
    std::vector<Link> out;
    std::ranges::set_difference(a.links(), b.links(), std::back_inserter(out));
    return AssociationSet(a.k(), std::move(out));
}

}  // namespace

AssociationSet zeta(const BipolarPattern& p, std::size_t k) { return devectorize(p, k); }

AssociationSet beta(const AssociationSet& test, const AssociationSet& result) {
    check_same_k(test, result, "beta");
    return difference(test, result);
}

AssociationSet gamma(const AssociationSet& result, const AssociationSet& stored) {
    check_same_k(result, stored, "gamma");
    return difference(result, stored);
}

double cosine(const BipolarPattern& a, const BipolarPattern& b) {
    if (a.size() != b.size()) {
        throw DimensionError("cosine: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    if (a.empty()) throw DimensionError("cosine of empty patterns");
    long dot = 0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    // |a| |b| = L for bipolar vectors; dividing by L directly keeps a == b at exactly 1.
    return static_cast<double>(dot) / static_cast<double>(a.size());
}

double recovery_accuracy(const AssociationSet& test, const AssociationSet& result) {
    check_same_k(test, result, "recovery_accuracy");
    std::vector<Link> common;
    std::ranges::set_intersection(test.links(), result.links(), std::back_inserter(common));
    const std::size_t united = test.size() + result.size() - common.size();
    if (united == 0) return 1.0;
    return static_cast<double>(common.size()) / static_cast<double>(united);
}

StageReport evaluate_stage(std::size_t stage, const BipolarPattern& stored, const BipolarPattern& test,
                           const BipolarPattern& result, std::size_t k) {
    const auto stored_links = zeta(stored, k);
    const auto test_links = zeta(test, k);
    const auto result_links = zeta(result, k);
    return StageReport{
        .stage = stage,
        .beta = beta(test_links, result_links),
        .gamma = gamma(result_links, stored_links),
        .cosine_test_vs_stored = cosine(test, stored),
        .cosine_result_vs_stored = cosine(result, stored),
        .recovery_accuracy = recovery_accuracy(test_links, result_links),
    };
}

}  // namespace hoplink
