#pragma once

#include "bosonic/channels.hpp"
#include "bosonic/char_fn.hpp"
#include "bosonic/dilation.hpp"
#include "bosonic/fock.hpp"

#include <nlohmann/json.hpp>

namespace bosonic {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

Json matrix_to_json(const RealMatrix& M);
RealMatrix matrix_from_json(const Json& j, const char* what);
Json vector_to_json(const RealVector& v);
RealVector vector_from_json(const Json& j, const char* what);

Json to_json(const CharFn& f);
/// expected_arity < 0 accepts any arity; "one" without "dim" takes it.
CharFn char_fn_from_json(const Json& j, int expected_arity = -1);

Json to_json(const PositivityCertificate& c);

/// Spec {"n", "X", "f"} or a preset such as {"preset": "amplifier", "gain": 2}.
LinearBosonicChannel channel_from_json(const Json& j, const ChannelOptions& options = {});
/// Same as channel_from_json without running any positivity test.
LinearBosonicChannel channel_from_json_unchecked(const Json& j);
Json to_json(const LinearBosonicChannel& ch);

Json to_json(const GaussianDilation& d);
/// The completion S is taken from the document when present and checked
/// against [X; Y]; otherwise it is recomputed.
GaussianDilation dilation_from_json(const Json& j);

Json to_json(const FockOperator& op);
FockOperator fock_operator_from_json(const Json& j);

}  // namespace bosonic
