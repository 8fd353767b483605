#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "loopbank/cascade.hpp"
#include "loopbank/common.hpp"
#include "loopbank/cuntz.hpp"
#include "loopbank/filters.hpp"
#include "loopbank/loop.hpp"

namespace loopbank::serialize {

using json = nlohmann::json;

// Document kinds are told apart by their characteristic field:
// "coeffs" (loop), "filters" (bank), "m0" (low-pass mask).
enum class DocKind { loop, bank, lowpass };

DocKind detect_kind(const json& doc);

// Wraps the JSON parser so malformed text surfaces as a "schema" error.
json parse(const std::string& text);

// Deterministic rendering: sorted keys, two-space indent, trailing newline.
// All doubles print in shortest round-trip form, so documents round-trip
// bit-exactly.
std::string dump(const json& doc);

json to_json(const loop::PolyLoop& a);
json to_json(const filters::FilterBank& b);
json lowpass_to_json(const cpoly::ScalarPoly& m0, int n);

// verify = false skips the unitarity / QMF diagnostic, never the schema.
loop::PolyLoop loop_from_json(const json& doc, double tol = kCertTol,
                              bool verify = true);
filters::FilterBank bank_from_json(const json& doc, double tol = kCertTol,
                                   bool verify = true);
// Returns the mask; *n_out receives the document's "n" or -1 when absent.
cpoly::ScalarPoly lowpass_from_json(const json& doc, int* n_out);

json to_json(const loop::Factorization& f);
json to_json(const cuntz::RepReport& rep);
json to_json(const cuntz::Intertwiner& iw);
json to_json(const cascade::SupportReport& rep);

// Columns: x, phi_re, phi_im, psi1_re, psi1_im, ...; shortest round-trip
// decimals throughout.
std::string family_csv(const cascade::SampledFunction& phi,
                       const std::vector<cascade::SampledFunction>& psis);

}  // namespace loopbank::serialize
