#pragma once

#include "lassocond/certify.hpp"
#include "lassocond/condition.hpp"
#include "lassocond/ensembles.hpp"
#include "lassocond/solver.hpp"
#include "lassocond/types.hpp"
#include "lassocond/wainwright.hpp"

#include <json.hpp>

namespace lassocond {

using nlohmann::json;

// JSON has no infinities; extended reals round-trip as the strings
// "inf" / "-inf".
json extended(double v);
double extended_from(const json& j);

json to_json(const SupportSet& s);
SupportSet support_from_json(const json& j);

json to_json(const LassoInstance& inst);
LassoInstance instance_from_json(const json& j);

json to_json(const NormBundle& nb);
json to_json(const LassoSolution& sol);
json to_json(const SigmaCertificate& cert);
json to_json(const WainwrightParams& p);
json to_json(const KHat& k);
json to_json(const SimpleVerdicts& v);
json to_json(const TrialRecord& r);
json to_json(const SelectionOutcome& o);
json to_json(const FailureReport& r);
json to_json(const Figure1Row& row);

EnsembleSpec ensemble_spec_from_json(const json& j);
json to_json(const EnsembleSpec& spec);

}  // namespace lassocond
