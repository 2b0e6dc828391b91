#pragma once

#include <string>

#include <json.hpp>

#include "spinsteer/mat_core.h"
#include "spinsteer/schedule.h"
#include "spinsteer/simkit.h"
#include "spinsteer/twospin.h"

namespace spinsteer::io {

using json = nlohmann::json;

// {"dim": n, "re": [[...]], "im": [[...]]}, row-major.
json matrix_to_json(const SquareMatrix& x);
SquareMatrix matrix_from_json(const json& j);

// {"steps": [{"gen": "Z1", "t": ...}]}
json sequence_to_json(const FactorSequence& seq);
// Steps only; generators must be attached by the caller.
FactorSequence sequence_from_json(const json& j);

// {"segments": [{"dt", "ux", "uy"} | {"dt", "mod": {"kbar","omega","phase","sign_uy"}}]}
json schedule_to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const json& j);

// {"gamma1","gamma2","J","uz","M","abc":[a,b,c]}; "abc" defaults to Ising.
json spin_params_to_json(const twospin::SpinParams& p);
twospin::SpinParams spin_params_from_json(const json& j);

json sim_result_to_json(const SimResult& r);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace spinsteer::io
