#pragma once

#include <json.hpp>

#include "coverforge/certificate.hpp"
#include "coverforge/descent.hpp"
#include "coverforge/lebesgue.hpp"

// JSON encodings. Rationals are strings "p/q", infinities "-inf"/"+inf".
// Fields are stored once in a document-level node table and referenced by
// position, so shared subexpressions stay shared.
namespace coverforge::io {

using json = nlohmann::json;

json encode(const Rational& q);
json encode(const Extended& e);
Rational decode_rational(const json& j, const std::string& where);

json encode(const Box& b);
json encode(const LatticeFamily& f);
json encode(const PLFunction& p);
json encode(const RadialMap& m);
json encode(const Rescaler& r);
Rescaler decode_rescaler(const json& j);

/// {"fields": [...], "cover": {...}}
json encode(const Cover& c);
Cover decode_cover(const json& j);

/// {"fields": [...], "root": {...}}
json encode(const Cert& c);
Cert decode_cert(const json& j);

json encode(const Site& s);
Site decode_site(const json& j);
json encode(const Presheaf& f);
/// The presheaf refers to `site`, which must outlive it.
Presheaf decode_presheaf(const json& j, const Site& site);

json encode(const VerificationReport& r);

/// Reads a JSON document; missing files and parse errors throw Malformed.
json read_file(const std::string& path);
/// Two-space indented with a trailing newline.
void write_file(const std::string& path, const json& j);

}  // namespace coverforge::io
