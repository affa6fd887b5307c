#pragma once

#include <cstddef>

#include "hoplink/pattern.hpp"
#include "hoplink/pipeline.hpp"

namespace hoplink {

/// Links whose bit is +1 in p (same mapping as devectorize).
AssociationSet zeta(const BipolarPattern& p, std::size_t k);

/// Links lost: present in the test set but missing from the recall result
/// (test \ result).
AssociationSet beta(const AssociationSet& test, const AssociationSet& result);

/// Links gained: asserted by recall but absent from the stored pattern
/// (result \ stored).
AssociationSet gamma(const AssociationSet& result, const AssociationSet& stored);

/// Cosine similarity a.b / (|a||b|). For bipolar vectors this is
/// (L - 2 hamming) / L.
double cosine(const BipolarPattern& a, const BipolarPattern& b);

/// Jaccard index |test ∩ result| / |test ∪ result|, 1.0 when both are empty.
double recovery_accuracy(const AssociationSet& test, const AssociationSet& result);

struct StageReport {
    std::size_t stage = 0;
    AssociationSet beta;
    AssociationSet gamma;
    double cosine_test_vs_stored = 0.0;
    double cosine_result_vs_stored = 0.0;
    double recovery_accuracy = 0.0;

    friend bool operator==(const StageReport&, const StageReport&) = default;
};

/// Evaluates one stage from the stored, test and recalled patterns.
StageReport evaluate_stage(std::size_t stage, const BipolarPattern& stored, const BipolarPattern& test,
                           const BipolarPattern& result, std::size_t k);

}  // namespace hoplink
