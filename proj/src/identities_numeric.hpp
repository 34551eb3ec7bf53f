#pragma once

#include "trigonal/identities.hpp"

namespace trigonal::detail {

IdentityReport numeric_prop41(const TrigonalCurve& c, const HarnessOptions& o);
IdentityReport numeric_lemma36(const TrigonalCurve& c, const HarnessOptions& o);
IdentityReport numeric_lemma51(const TrigonalCurve& c, const HarnessOptions& o);
IdentityReport numeric_fs(const TrigonalCurve& c, int n, const HarnessOptions& o);
IdentityReport numeric_kiepert(const TrigonalCurve& c, int n, const HarnessOptions& o);
IdentityReport numeric_bilinear(const TrigonalCurve& c, const HarnessOptions& o);

}  // namespace trigonal::detail
