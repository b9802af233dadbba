#pragma once

// Small-language-model tasks: verification-question generation and fake
// headline generation, plus the prompt templates both use.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "veritas/core.hpp"
#include "veritas/text.hpp"

namespace veritas::pipelines {

enum class SlmTask { Question, FakeHeadline };
enum class SlmKind { Mistral, Phi3 };

inline std::string_view toString(SlmTask t) { return t == SlmTask::Question ? "question" : "fake_headline"; }
inline std::string_view toString(SlmKind k) { return k == SlmKind::Mistral ? "mistral" : "phi3"; }

inline constexpr std::string_view kHeadlinePlaceholder = "{headline}";

class PromptTemplate {
public:
    PromptTemplate(SlmTask task, std::string text) : task_(task), text_(std::move(text)) {
        const auto first = text_.find(kHeadlinePlaceholder);
        if (first == std::string::npos || text_.find(kHeadlinePlaceholder, first + 1) != std::string::npos)
            throw Error("prompt template must contain exactly one {headline} placeholder");
    }

    static PromptTemplate load(SlmTask task, const std::string& path) { return {task, text::readFile(path)}; }

    SlmTask task() const { return task_; }
    const std::string& text() const { return text_; }

    std::string render(std::string_view headline) const {
        std::string out = text_;
        out.replace(out.find(kHeadlinePlaceholder), kHeadlinePlaceholder.size(), headline);
        return out;
    }

private:
    SlmTask task_;
    std::string text_;
};

struct SlmRequest {
    SlmTask task = SlmTask::Question;
    SlmKind model = SlmKind::Phi3;
    std::string headline;
    std::string prompt;
    double temperature = 0.0;
    int maxNewTokens = 64;
    int attempt = 0;  // regeneration counter; lets deterministic backends vary output
};

class SlmBackend {
public:
    virtual ~SlmBackend() = default;
    virtual std::string generate(const SlmRequest& request) = 0;
};

class QuestionGenFailure : public Error {
public:
    using Error::Error;
};

class DegenerateGeneration : public Error {
public:
    using Error::Error;
};

namespace detail {

/// Drops list markers, "Question:"-style labels and wrapping quotes.
inline std::string cleanGeneratedLine(std::string_view line, std::initializer_list<std::string_view> labels) {
    std::string s = text::normalizeWhitespace(line);
    bool changed = true;
    while (changed && !s.empty()) {
        changed = false;
        for (auto label : labels) {
            if (s.size() >= label.size() && text::toLowerAscii(s.substr(0, label.size())) == label) {
                s = text::trim(std::string_view(s).substr(label.size()));
                changed = true;
            }
        }
        if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
            s = text::trim(std::string_view(s).substr(1));
            changed = true;
        }
        if (s.size() > 2 && std::isdigit(static_cast<unsigned char>(s[0])) && (s[1] == '.' || s[1] == ')')) {
            s = text::trim(std::string_view(s).substr(2));
            changed = true;
        }
    }
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'')) {
        s.erase(s.begin());
        if (!s.empty() && (s.back() == '"' || s.back() == '\'')) s.pop_back();
    }
    return text::trim(s);
}

inline std::vector<std::string> lines(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find('\n', start);
        if (end == std::string_view::npos) end = s.size();
        out.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace detail

/// The first line of `output` that contains '?', cut just after its first '?'.
inline std::optional<std::string> extractQuestion(std::string_view output) {
    for (const auto& line : detail::lines(output)) {
        const auto q = line.find('?');
        if (q == std::string::npos) continue;
        std::string cleaned = detail::cleanGeneratedLine(std::string_view(line).substr(0, q + 1), {"question:", "q:"});
        if (cleaned.size() > 1) return cleaned;
    }
    return std::nullopt;
}

inline std::string generateQuestion(const std::string& headline, SlmBackend& slm, SlmKind model,
                                    const PromptTemplate& prompt) {
    if (trimView(headline).empty()) throw Error("headline must be non-empty");
    SlmRequest req;
    req.task = SlmTask::Question;
    req.model = model;
    req.headline = headline;
    req.prompt = prompt.render(headline);
    const std::string out = slm.generate(req);
    if (auto q = extractQuestion(out)) return *q;
    throw QuestionGenFailure("model output contains no question: " + text::normalizeWhitespace(out).substr(0, 120));
}

/// Perturbed one-line headline; regenerates once if the model echoes the input.
inline std::string generateFakeHeadline(const std::string& headline, SlmBackend& slm, SlmKind model,
                                        const PromptTemplate& prompt) {
    if (trimView(headline).empty()) throw Error("headline must be non-empty");
    const std::string norm = text::toLowerAscii(text::normalizeWhitespace(headline));
    for (int attempt = 0; attempt < 2; ++attempt) {
        SlmRequest req;
        req.task = SlmTask::FakeHeadline;
        req.model = model;
        req.headline = headline;
        req.prompt = prompt.render(headline);
        req.attempt = attempt;
        std::string first;
        for (const auto& line : detail::lines(slm.generate(req))) {
            first = detail::cleanGeneratedLine(line, {"fake headline:", "fake news headline:", "headline:"});
            if (!first.empty()) break;
        }
        if (!first.empty() && text::toLowerAscii(text::normalizeWhitespace(first)) != norm) return first;
    }
    throw DegenerateGeneration("model reproduced the input headline: " + headline);
}

// ---------------------------------------------------------------------------
// Mock backend
// ---------------------------------------------------------------------------

/// Deterministic SLM stand-in. Responses come from a script keyed by
/// (task, model, normalized headline); unscripted requests get a template
/// answer: "Is it true that <headline>?" for questions, and a number bump
/// or an inserted negation for fake headlines.
class ScriptedSlmBackend : public SlmBackend {
public:
    ScriptedSlmBackend() = default;

    /// {"question": {"phi3": {"<headline>": "<text>"}, "mistral": {...}}, "fake_headline": {...}}
    static std::shared_ptr<ScriptedSlmBackend> load(const std::string& path) {
        auto b = std::make_shared<ScriptedSlmBackend>();
        try {
            const auto j = nlohmann::json::parse(text::readFile(path));
            for (auto task : {SlmTask::Question, SlmTask::FakeHeadline}) {
                const std::string tk(toString(task));
                if (!j.contains(tk)) continue;
                for (auto kind : {SlmKind::Mistral, SlmKind::Phi3}) {
                    const std::string mk(toString(kind));
                    if (!j[tk].contains(mk)) continue;
                    for (const auto& [h, response] : j[tk][mk].items()) b->script(task, kind, h, response.get<std::string>());
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed SLM script " + path + ": " + e.what());
        }
        return b;
    }

    void script(SlmTask task, SlmKind model, std::string_view headline, std::string response) {
        std::lock_guard lock(mu_);
        script_[key(task, model, headline)] = std::move(response);
    }

    std::string generate(const SlmRequest& r) override {
        std::lock_guard lock(mu_);
        ++calls_;
        if (auto it = script_.find(key(r.task, r.model, r.headline)); it != script_.end()) return it->second;
        const std::string h = text::normalizeWhitespace(r.headline);
        if (r.task == SlmTask::Question) return "Is it true that " + h + "?";
        return perturb(h, r.attempt);
    }

    std::size_t calls() const {
        std::lock_guard lock(mu_);
        return calls_;
    }

    /// Bumps the first number by 1 + attempt; without numbers, negates.
    static std::string perturb(const std::string& h, int attempt) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(h[i]))) continue;
            std::size_t j = i;
            while (j < h.size() && std::isdigit(static_cast<unsigned char>(h[j]))) ++j;
            if (j - i > 9) break;
            const long v = std::stol(h.substr(i, j - i)) + 1 + attempt;
            return h.substr(0, i) + std::to_string(v) + h.substr(j);
        }
        return attempt == 0 ? "No, " + h + " did not happen" : "Reports deny that " + h;
    }

private:
    static std::string key(SlmTask t, SlmKind k, std::string_view headline) {
        return std::string(toString(t)) + "|" + std::string(toString(k)) + "|" +
               text::toLowerAscii(text::normalizeWhitespace(headline));
    }

    mutable std::mutex mu_;
    std::map<std::string, std::string> script_;
    std::size_t calls_ = 0;
};

}  // namespace veritas::pipelines
