#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ordident/distributions.hpp"
#include "ordident/random_expr.hpp"

namespace ordident {

// Catalog of the distributional identities the library verifies. Each
// record is a parametric template: instantiate(params, base) produces the
// two sides as expressions. `base` substitutes the characterized sample
// law (the order statistics being decomposed); auxiliary randomization
// laws (the uniform/exponential/beta multipliers and shifts) are fixed by
// the identity itself. Passing a base outside the record's family is
// allowed deliberately: mismatches are what the discrimination checks
// measure.

struct IdentityParams {
    int k = 0;
    int m = 0;  // 0 when the record has no m parameter
    int n = 0;
};

enum class IdentityFamily { ParetoII, Logistic, ExponentialOrderStat, UniformOrderStat };

std::string identity_family_name(IdentityFamily f);

// The family's canonical member: ParetoII(1,1), Logistic(0,1),
// Exponential(1), or Uniform01.
Distribution matching_base(IdentityFamily f);

struct IdentityRecord {
    std::string id;              // e.g. "L8i"; stable CLI identifier
    std::string source_tag;      // catalog grouping label, e.g. "L8(i)"
    std::string statement;       // human-readable equality
    std::string constraint_text;
    IdentityFamily family;
    bool uses_m = false;
    std::function<bool(const IdentityParams&)> constraint;
    std::function<RandomExpr(const IdentityParams&, const Distribution&)> lhs;
    std::function<RandomExpr(const IdentityParams&, const Distribution&)> rhs;
};

// Exactly 15 records, ids: L6ii..L6v, L7i..L7v, L8i..L8iv, P3, P4.
const std::vector<IdentityRecord>& catalog();

// Throws std::out_of_range for unknown ids.
const IdentityRecord& find_identity(const std::string& id);

// All (k, m, n) satisfying the record's constraint with n <= n_max,
// sorted by (k, m, n). m is 0 for records without an m parameter.
std::vector<IdentityParams> enumerate_params(const IdentityRecord& rec, int n_max);

}  // namespace ordident
