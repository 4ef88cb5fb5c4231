//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/data_model.h"

#include <charconv>
#include <set>
#include <sstream>
#include <utility>

#include "colddti/checksum.h"

namespace colddti {

std::string_view to_string(SpanKind kind) {
  return kind == SpanKind::kSecondary ? "secondary" : "tertiary";
}

std::string_view to_string(SecondaryType type) {
  switch (type) {
  case SecondaryType::kHelix:
    return "Helix";
  case SecondaryType::kSheet:
    return "Sheet";
  case SecondaryType::kTurn:
    return "Turn";
  case SecondaryType::kBend:
    return "Bend";
  case SecondaryType::kNone:
    break;
  }
  return "-";
}

SpanKind parse_span_kind(std::string_view text) {
  if (text == "secondary")
    return SpanKind::kSecondary;
  if (text == "tertiary")
    return SpanKind::kTertiary;
  throw DataError("unknown structure kind '" + std::string(text) + "'");
}

SecondaryType parse_secondary_type(std::string_view text) {
  if (text == "Helix")
    return SecondaryType::kHelix;
  if (text == "Sheet")
    return SecondaryType::kSheet;
  if (text == "Turn")
    return SecondaryType::kTurn;
  if (text == "Bend")
    return SecondaryType::kBend;
  if (text == "-")
    return SecondaryType::kNone;
  throw DataError("unknown secondary type '" + std::string(text) + "'");
}

std::string StructureSpan::descriptor() const {
  std::ostringstream oss;
  oss << to_string(kind) << ':' << to_string(secondary_type) << ':' << start
      << '-' << end;
  return oss.str();
}

std::size_t ProteinRecord::count_spans(SpanKind k) const {
  std::size_t n = 0;
  for (const StructureSpan &s: spans)
    n += static_cast<std::size_t>(s.kind == k);
  return n;
}

void check_span(const StructureSpan &span, int protein_length) {
  if (span.start < 1 || span.start > span.end || span.end > protein_length) {
    std::ostringstream oss;
    oss << "span " << span.start << '-' << span.end
        << " out of range for protein of length " << protein_length;
    throw DataError(oss.str());
  }
  const bool typed = span.secondary_type != SecondaryType::kNone;
  if (typed != (span.kind == SpanKind::kSecondary)) {
    throw DataError("span " + span.descriptor()
                    + ": secondary spans need a type, tertiary spans must "
                      "use '-'");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t> &indices) const {
  Dataset out;
  out.drugs = drugs;
  out.proteins = proteins;
  out.interactions_sha256 = interactions_sha256;
  out.samples.reserve(indices.size());
  for (std::size_t i: indices)
    out.samples.push_back(samples.at(i));
  return out;
}

void check_invariants(const Dataset &ds) {
  for (const auto &[id, drug]: ds.drugs) {
    if (id.empty() || id != drug.id)
      throw DataError("drug key/id mismatch for '" + id + "'");
    if (drug.smiles.empty())
      throw DataError("drug '" + id + "' has empty SMILES");
  }
  for (const auto &[id, prot]: ds.proteins) {
    if (id.empty() || id != prot.id)
      throw DataError("protein key/id mismatch for '" + id + "'");
    if (prot.residues.empty())
      throw DataError("protein '" + id + "' has no residues");
    for (const StructureSpan &s: prot.spans)
      check_span(s, prot.length());
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const InteractionSample &s: ds.samples) {
    if (s.label != 0 && s.label != 1)
      throw DataError("label must be 0 or 1");
    if (!ds.drugs.contains(s.drug_id))
      throw DataError("unknown drug id '" + s.drug_id + "'");
    if (!ds.proteins.contains(s.protein_id))
      throw DataError("unknown protein id '" + s.protein_id + "'");
    if (!seen.emplace(s.drug_id, s.protein_id).second) {
      throw DataError("duplicate pair (" + s.drug_id + ", " + s.protein_id
                      + ")");
    }
  }
}

DataPaths DataPaths::in_directory(const std::filesystem::path &dir) {
  return { dir / "drugs.tsv", dir / "proteins.tsv", dir / "structures.tsv",
           dir / "interactions.tsv" };
}

namespace {

class TsvReader {
public:
  TsvReader(const std::filesystem::path &path, std::string contents)
      : name_(path.filename().string()), iss_(std::move(contents)) { }

  // Returns false at end of file; blank lines are skipped.
  bool next(std::size_t expected_fields) {
    std::string line;
    while (std::getline(iss_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.empty())
        continue;

      fields_.clear();
      std::size_t pos = 0;
      while (true) {
        std::size_t tab = line.find('\t', pos);
        fields_.push_back(line.substr(pos, tab - pos));
        if (tab == std::string::npos)
          break;
        pos = tab + 1;
      }
      if (fields_.size() != expected_fields) {
        std::ostringstream oss;
        oss << "expected " << expected_fields << " tab-separated fields, got "
            << fields_.size();
        fail(oss.str());
      }
      return true;
    }
    return false;
  }

  const std::string &operator[](std::size_t i) const { return fields_[i]; }

  int parse_int(std::size_t i) const {
    const std::string &f = fields_[i];
    int value = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size())
      fail("not an integer: '" + f + "'");
    return value;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    std::ostringstream oss;
    oss << name_ << ':' << line_no_ << ": " << msg;
    throw DataError(oss.str());
  }

  // Re-throws a DataError with this reader's file:line prefix.
  template <class Fn>
  auto at_line(Fn &&fn) const {
    try {
      return fn();
    } catch (const DataError &e) {
      fail(e.what());
    }
  }

private:
  std::string name_;
  std::istringstream iss_;
  std::vector<std::string> fields_;
  std::size_t line_no_ = 0;
};

}  // namespace

Dataset load_dataset(const DataPaths &paths) {
  Dataset ds;

  {
    TsvReader r(paths.drugs, read_file(paths.drugs));
    while (r.next(2)) {
      if (r[0].empty())
        r.fail("empty drug id");
      if (r[1].empty())
        r.fail("empty SMILES for drug '" + r[0] + "'");
      if (!ds.drugs.emplace(r[0], DrugRecord { r[0], r[1] }).second)
        r.fail("duplicate drug id '" + r[0] + "'");
    }
  }

  {
    TsvReader r(paths.proteins, read_file(paths.proteins));
    while (r.next(2)) {
      if (r[0].empty())
        r.fail("empty protein id");
      if (r[1].empty())
        r.fail("empty residue sequence for protein '" + r[0] + "'");
      if (!ds.proteins.emplace(r[0], ProteinRecord { r[0], r[1], {} }).second)
        r.fail("duplicate protein id '" + r[0] + "'");
    }
  }

  {
    TsvReader r(paths.structures, read_file(paths.structures));
    while (r.next(5)) {
      auto it = ds.proteins.find(r[0]);
      if (it == ds.proteins.end())
        r.fail("unknown protein id '" + r[0] + "'");
      StructureSpan span;
      span.kind = r.at_line([&] { return parse_span_kind(r[1]); });
      span.start = r.parse_int(2);
      span.end = r.parse_int(3);
      span.secondary_type =
          r.at_line([&] { return parse_secondary_type(r[4]); });
      r.at_line([&] {
        check_span(span, it->second.length());
        return 0;
      });
      it->second.spans.push_back(span);
    }
  }

  {
    std::string contents = read_file(paths.interactions);
    ds.interactions_sha256 = sha256_hex(contents);
    TsvReader r(paths.interactions, std::move(contents));
    std::set<std::pair<std::string, std::string>> seen;
    while (r.next(3)) {
      if (!ds.drugs.contains(r[0]))
        r.fail("unknown drug id '" + r[0] + "'");
      if (!ds.proteins.contains(r[1]))
        r.fail("unknown protein id '" + r[1] + "'");
      if (r[2] != "0" && r[2] != "1")
        r.fail("label must be 0 or 1, got '" + r[2] + "'");
      if (!seen.emplace(r[0], r[1]).second)
        r.fail("duplicate pair (" + r[0] + ", " + r[1] + ")");
      ds.samples.push_back({ r[0], r[1], r[2] == "1" ? 1 : 0 });
    }
  }

  return ds;
}

void write_dataset(const Dataset &ds, const DataPaths &paths) {
  std::ostringstream drugs, proteins, structures, interactions;
  for (const auto &[id, d]: ds.drugs)
    drugs << id << '\t' << d.smiles << '\n';
  for (const auto &[id, p]: ds.proteins) {
    proteins << id << '\t' << p.residues << '\n';
    for (const StructureSpan &s: p.spans) {
      structures << id << '\t' << to_string(s.kind) << '\t' << s.start << '\t'
                 << s.end << '\t' << to_string(s.secondary_type) << '\n';
    }
  }
  for (const InteractionSample &s: ds.samples)
    interactions << s.drug_id << '\t' << s.protein_id << '\t' << s.label
                 << '\n';

  write_file_atomic(paths.drugs, drugs.str());
  write_file_atomic(paths.proteins, proteins.str());
  write_file_atomic(paths.structures, structures.str());
  write_file_atomic(paths.interactions, interactions.str());
}

ValidationReport validate(const Dataset &ds) {
  ValidationReport rep;
  rep.drugs = ds.drugs.size();
  rep.proteins = ds.proteins.size();
  for (const InteractionSample &s: ds.samples) {
    if (s.label == 1)
      ++rep.positives;
    else
      ++rep.negatives;
  }
  for (const auto &[id, p]: ds.proteins) {
    if (p.count_spans(SpanKind::kSecondary) == 0)
      ++rep.proteins_without_secondary;
    if (p.count_spans(SpanKind::kTertiary) == 0)
      ++rep.proteins_without_tertiary;
  }
  return rep;
}

}  // namespace colddti
