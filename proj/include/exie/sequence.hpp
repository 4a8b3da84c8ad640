#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exie/error.hpp"
#include "exie/operators.hpp"

namespace exie {

/// An ordered operator program plus free-form provenance.  meta is an
/// arbitrary JSON object (source and target identifiers, configuration echo,
/// search statistics); the library itself never interprets it.
struct EditSequence {
  std::vector<Operator> ops;
  nlohmann::json meta = nlohmann::json::object();
};

/// Apply a sequence's operators left to right.
inline Image apply_sequence(const EditSequence& seq, const Image& img) {
  return apply_sequence(std::span<const Operator>(seq.ops), img);
}

namespace detail {

/// Shortest decimal form of a menu parameter ("0.05", "-0.005", "1.4", ...).
inline std::string param_text(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

inline const char* family_menu_desc(OpFamily f) {
  switch (f) {
    case OpFamily::Brightness: return "brightness delta";
    case OpFamily::Contrast: return "contrast sigma";
    case OpFamily::Gamma: return "gamma value";
  }
  return "parameter";
}

/// Snap a parsed param to its family menu (1e-9 tolerance) or report why it
/// does not belong.
inline double snap_param(OpFamily family, double p, const std::string& where) {
  const auto find = [&](std::span<const double> menu) {
    for (double m : menu)
      if (std::fabs(p - m) <= 1e-9) return m;
    throw ParseError(where + ": " + param_text(p) + " is not a valid " +
                     family_menu_desc(family));
  };
  switch (family) {
    case OpFamily::Brightness:
      return find({kBrightnessDeltas.data(), kBrightnessDeltas.size()});
    case OpFamily::Contrast:
      return find({kContrastSigmas.data(), kContrastSigmas.size()});
    case OpFamily::Gamma:
      return find({kGammaValues.data(), kGammaValues.size()});
  }
  throw ParseError(where + ": unknown family");
}

inline OpFamily parse_family(const std::string& s, const std::string& where) {
  if (s == "brightness") return OpFamily::Brightness;
  if (s == "contrast") return OpFamily::Contrast;
  if (s == "gamma") return OpFamily::Gamma;
  throw ParseError(where + ": unknown family \"" + s + "\"");
}

inline ChannelSelector parse_selector(const std::string& s,
                                      const std::string& where) {
  if (s == "all") return ChannelSelector::All;
  if (s == "r") return ChannelSelector::R;
  if (s == "g") return ChannelSelector::G;
  if (s == "b") return ChannelSelector::B;
  throw ParseError(where + ": unknown channel selector \"" + s + "\"");
}

} // namespace detail

/// JSON object for one operator: {"family": ..., "param": ..., "channels": ...}.
inline nlohmann::json operator_to_json(const Operator& op) {
  return {{"family", family_name(op.family)},
          {"param", op.param},
          {"channels", selector_name(op.channels)}};
}

/// Serialize a sequence as a UTF-8 JSON document:
///   {"version": 1, "operators": [...], "meta": {...}}
/// Object keys are emitted in sorted order and the text ends with a newline,
/// so equal sequences serialize to identical bytes.
inline std::string serialize(const EditSequence& seq) {
  nlohmann::json doc;
  doc["version"] = 1;
  nlohmann::json ops = nlohmann::json::array();
  for (const Operator& op : seq.ops) ops.push_back(operator_to_json(op));
  doc["operators"] = std::move(ops);
  doc["meta"] = seq.meta;
  return doc.dump(2) + "\n";
}

/// Parse and validate a serialized sequence.  Rejected with ParseError:
/// malformed JSON, a non-object document, a missing or non-1 version, a
/// missing operators array, an operator entry that is not an object, an
/// unknown family or channel selector, a param outside its family menu
/// (1e-9 tolerance, snapped to the exact menu value on success), and a
/// non-object meta.  A missing meta defaults to an empty object.
inline EditSequence parse_sequence(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ParseError("sequence document must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer())
    throw ParseError("missing integer \"version\"");
  if (doc["version"].get<int>() != 1)
    throw ParseError("unsupported version " + doc["version"].dump() +
                     " (want 1)");
  if (!doc.contains("operators") || !doc["operators"].is_array())
    throw ParseError("missing \"operators\" array");

  EditSequence seq;
  std::size_t idx = 0;
  for (const nlohmann::json& entry : doc["operators"]) {
    const std::string where = "operators[" + std::to_string(idx) + "]";
    if (!entry.is_object())
      throw ParseError(where + ": not an object");
    if (!entry.contains("family") || !entry["family"].is_string())
      throw ParseError(where + ": missing string \"family\"");
    if (!entry.contains("param") || !entry["param"].is_number())
      throw ParseError(where + ": missing numeric \"param\"");
    if (!entry.contains("channels") || !entry["channels"].is_string())
      throw ParseError(where + ": missing string \"channels\"");
    Operator op;
    op.family = detail::parse_family(entry["family"].get<std::string>(), where);
    op.param = detail::snap_param(op.family, entry["param"].get<double>(),
                                  where);
    op.channels =
        detail::parse_selector(entry["channels"].get<std::string>(), where);
    seq.ops.push_back(op);
    ++idx;
  }
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object())
      throw ParseError("\"meta\" must be an object");
    seq.meta = doc["meta"];
  }
  return seq;
}

/// Operator usage counts for one or more sequences.
struct OperatorHistogram {
  std::size_t total = 0;
  /// Count per exact operator.
  std::map<Operator, std::size_t, OperatorLess> per_operator;
  /// Count per (family, selector) group, param ignored.
  std::map<std::pair<std::string, std::string>, std::size_t> per_group;

  void add(const EditSequence& seq) {
    for (const Operator& op : seq.ops) {
      ++total;
      ++per_operator[op];
      ++per_group[{family_name(op.family), selector_name(op.channels)}];
    }
  }
};

/// Histogram of a single sequence.
inline OperatorHistogram op_histogram(const EditSequence& seq) {
  OperatorHistogram h;
  h.add(seq);
  return h;
}

} // namespace exie
