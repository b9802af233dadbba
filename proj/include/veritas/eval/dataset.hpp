#pragma once

// Dataset loading: LIAR TSV and the evaluation CSV (headline,label,source,domain).

#include <map>
#include <set>
#include <string>
#include <vector>

#include "veritas/core.hpp"
#include "veritas/text.hpp"

namespace veritas::eval {

enum class SourceFormat { LiarTsv, EvalCsv };

struct Dataset {
    std::string name;
    SourceFormat sourceFormat = SourceFormat::EvalCsv;
    std::vector<ClaimRecord> records;
    std::vector<std::string> warnings;

    std::size_t size() const { return records.size(); }
};

// ---------------------------------------------------------------------------
// CSV (RFC 4180)
// ---------------------------------------------------------------------------

using CsvRow = std::vector<std::string>;

struct CsvTable {
    std::vector<CsvRow> rows;
    std::vector<std::size_t> lines;  // 1-based starting line of each row
};

/// Quoted fields may contain commas, doubled quotes and line breaks. CRLF and
/// LF are both accepted; a trailing newline does not produce an empty row.
inline CsvTable parseCsv(std::string_view s, char delim = ',') {
    CsvTable t;
    CsvRow row;
    std::string field;
    bool quoted = false, fieldStarted = false, rowStarted = false;
    std::size_t line = 1, rowLine = 1;
    auto endField = [&] {
        row.push_back(std::move(field));
        field.clear();
        fieldStarted = false;
    };
    auto endRow = [&] {
        endField();
        t.rows.push_back(std::move(row));
        t.lines.push_back(rowLine);
        row.clear();
        rowStarted = false;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (!rowStarted) {
            rowStarted = true;
            rowLine = line;
        }
        if (quoted) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && !fieldStarted) {
            quoted = true;
            fieldStarted = true;
        } else if (c == delim) {
            endField();
        } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            endRow();
            ++line;
        } else {
            field += c;
            fieldStarted = true;
        }
    }
    if (quoted) throw DatasetFormatError("unterminated quoted field starting on line " + std::to_string(rowLine));
    if (rowStarted) endRow();
    return t;
}

inline std::string csvEscape(std::string_view v) {
    if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csvLine(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csvEscape(fields[i]);
    }
    return out + "\n";
}

// ---------------------------------------------------------------------------
// Loaders
// ---------------------------------------------------------------------------

inline constexpr double kMaxMalformedFraction = 0.05;

/// LIAR layout: id, six-way label, statement, then metadata columns.
inline Dataset parseLiar(std::string_view content, std::string name = "liar") {
    Dataset d;
    d.name = std::move(name);
    d.sourceFormat = SourceFormat::LiarTsv;
    std::vector<std::string> offenders;
    std::set<std::string> ids;
    std::size_t total = 0, lineNo = 0, start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(start, end - start);
        start = end + 1;
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trimView(line).empty()) continue;
        ++total;
        std::vector<std::string> cols;
        std::size_t p = 0;
        while (true) {
            auto tab = line.find('\t', p);
            cols.emplace_back(line.substr(p, tab == std::string_view::npos ? std::string_view::npos : tab - p));
            if (tab == std::string_view::npos) break;
            p = tab + 1;
        }
        std::string problem;
        std::optional<SixWayLabel> raw;
        if (cols.size() < 3) {
            problem = "fewer than 3 columns";
        } else if (!(raw = parseSixWayLabel(cols[1]))) {
            problem = "unknown label '" + text::trim(cols[1]) + "'";
        } else if (trimView(cols[2]).empty()) {
            problem = "empty statement";
        } else if (!ids.insert(text::trim(cols[0])).second) {
            problem = "duplicate id '" + text::trim(cols[0]) + "'";
        }
        if (!problem.empty()) {
            const std::string w = "line " + std::to_string(lineNo) + ": " + problem;
            d.warnings.push_back(w);
            if (offenders.size() < 3) offenders.push_back(w);
            continue;
        }
        ClaimRecord r;
        r.id = text::trim(cols[0]);
        if (r.id.empty()) r.id = "line-" + std::to_string(lineNo);
        r.text = text::trim(cols[2]);
        r.rawLabel = raw;
        r.label = mapLiarLabel(*raw);
        d.records.push_back(std::move(r));
    }
    if (total == 0) throw DatasetFormatError("LIAR file '" + d.name + "' has no rows");
    const double bad = static_cast<double>(total - d.records.size()) / static_cast<double>(total);
    if (bad > kMaxMalformedFraction)
        throw DatasetFormatError(std::to_string(total - d.records.size()) + " of " + std::to_string(total) +
                                 " LIAR rows malformed; first: " + text::join(offenders, "; "));
    return d;
}

inline Dataset loadLiar(const std::string& path) { return parseLiar(text::readFile(path), path); }

/// Header must include headline and label; id, source and domain are optional.
/// Without an id column records are numbered "row-<n>" by data row.
inline Dataset parseEvalCsv(std::string_view content, std::string name = "eval") {
    Dataset d;
    d.name = std::move(name);
    d.sourceFormat = SourceFormat::EvalCsv;
    const auto table = parseCsv(content);
    if (table.rows.empty()) throw DatasetFormatError("evaluation file '" + d.name + "' is empty");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table.rows[0].size(); ++i) {
        std::string h = text::toLowerAscii(text::trim(table.rows[0][i]));
        if (i == 0 && h.rfind("\xef\xbb\xbf", 0) == 0) h = h.substr(3);
        col.emplace(h, i);
    }
    for (const char* required : {"headline", "label"})
        if (!col.count(required))
            throw DatasetFormatError("evaluation file '" + d.name + "' lacks required column '" + required + "'");
    auto cell = [&](const CsvRow& row, const char* name) -> std::optional<std::string> {
        auto it = col.find(name);
        if (it == col.end() || it->second >= row.size()) return std::nullopt;
        return text::trim(row[it->second]);
    };
    std::set<std::string> ids;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = d.name + ":" + std::to_string(table.lines[r]);
        if (row.size() == 1 && trimView(row[0]).empty()) continue;
        ClaimRecord rec;
        rec.id = cell(row, "id").value_or("");
        if (rec.id.empty()) rec.id = "row-" + std::to_string(r);
        if (!ids.insert(rec.id).second) throw DatasetFormatError(where + ": duplicate id '" + rec.id + "'");
        rec.text = cell(row, "headline").value_or("");
        const std::string label = cell(row, "label").value_or("");
        rec.label = parseBinaryLabel(label);
        if (!rec.label) throw DatasetFormatError(where + ": unrecognised label '" + label + "'");
        if (auto s = cell(row, "source"); s && !s->empty()) rec.source = *s;
        if (auto s = cell(row, "domain"); s && !s->empty()) rec.domainTag = *s;
        try {
            rec.validate();
        } catch (const DatasetFormatError& e) {
            throw DatasetFormatError(where + ": " + e.what());
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

inline Dataset loadEval(const std::string& path) { return parseEvalCsv(text::readFile(path), path); }

inline std::string writeEvalCsv(const Dataset& d) {
    std::string out = csvLine({"id", "headline", "label", "source", "domain"});
    for (const auto& r : d.records)
        out += csvLine({r.id, r.text, r.label ? std::string(toString(*r.label)) : "", r.source.value_or(""),
                        r.domainTag.value_or("")});
    return out;
}

}  // namespace veritas::eval
