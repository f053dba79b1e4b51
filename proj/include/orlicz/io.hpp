#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "orlicz/envelope.hpp"
#include "orlicz/renorm.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/seqspace.hpp"
#include "orlicz/twisted.hpp"

namespace orlicz::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Missing files and malformed JSON are
/// SchemaErrors.
Json read_json_file(const std::string& path);

/// {"kind":"power","p":2} | {"kind":"power_log","p":2}
/// | {"kind":"extension","base":{...},"p":2}   (exponent chosen by extend)
/// | {"kind":"extension","base":{...},"q":3}   (explicit exponent)
/// | {"kind":"table","knots":[...],"values":[...]}
OrliczFn parse_function(const Json& j);
Json to_json(const OrliczFn& f);

/// {"dim":2,"entries":[[1,[0.5,-1.0]],[4,[2,0]]]}. For dim 1 an entry may
/// also be [index, value].
VecSeq parse_sequence(const Json& j);
Json to_json(const VecSeq& s);

/// A dim-2 sequence file read as (x_k, y_k) pairs.
PairSeq parse_pair(const Json& j);

/// {"n":2,"blocks":[[1,0],[0.5,-2]]}
BlockSeq parse_blocks(const Json& j);
Json to_json(const BlockSeq& b);

Json to_json(const SupEstimate& e);
/// {"C":..,"delta2":..,"M":..,"M_prime":..,"indices":[a,b],"grid":{...}} plus detail.
Json to_json(const ScalarConstants& c, const SamplingPlan& plan = {});
Json to_json(const Point& x, int dim);

/// Header x1..xn,value,envelope then one row per node.
void write_envelope_csv(std::ostream& out, const EnvelopeGrid& g);

}  // namespace orlicz::io
