#include "lagrmc/experiment_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "lagrmc/errors.hpp"

namespace lagrmc {

namespace {

// ---- value model ----

struct Value {
    enum class Kind { Int, Float, Str, Bool, Array, Table };
    Kind kind = Kind::Int;
    std::int64_t i = 0;
    double f = 0.0;
    bool b = false;
    std::string s;
    std::vector<Value> arr;
    std::vector<std::pair<std::string, Value>> tbl;
    int line = 0, col = 0;

    std::string kind_name() const {
        switch (kind) {
        case Kind::Int: return "integer";
        case Kind::Float: return "float";
        case Kind::Str: return "string";
        case Kind::Bool: return "boolean";
        case Kind::Array: return "array";
        case Kind::Table: return "inline table";
        }
        return "?";
    }
};

using KvList = std::vector<std::pair<std::string, Value>>;

struct Document {
    KvList top;
    std::vector<std::pair<std::string, KvList>> sections; // in file order
    std::vector<std::pair<std::string, int>> section_lines;
};

// ---- tokenizer / parser ----

bool key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class LineParser {
public:
    LineParser(std::string_view text, std::string_view source)
        : text_(text), source_(source) {}

    Document parse() {
        Document doc;
        KvList* current = &doc.top;
        std::size_t start = 0;
        while (start <= text_.size()) {
            const std::size_t end = text_.find('\n', start);
            line_ = text_.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                      : end - start);
            pos_ = 0;
            skip_ws();
            if (!at_end() && peek() != '#') {
                if (peek() == '[') {
                    const std::string name = parse_section_header();
                    for (auto& [n, kv] : doc.sections)
                        if (n == name) fail("duplicate section [" + name + "]", sec_col_);
                    doc.sections.emplace_back(name, KvList{});
                    doc.section_lines.emplace_back(name, lineno_);
                    current = &doc.sections.back().second;
                } else {
                    parse_key_value(*current);
                }
                skip_ws();
                if (!at_end() && peek() != '#')
                    fail("unexpected characters after value", pos_ + 1);
            }
            if (end == std::string_view::npos) break;
            start = end + 1;
            ++lineno_;
        }
        return doc;
    }

private:
    std::string_view text_, source_, line_;
    std::size_t pos_ = 0;
    int lineno_ = 1;
    int sec_col_ = 1;

    bool at_end() const { return pos_ >= line_.size(); }
    char peek() const { return line_[pos_]; }
    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t col) const {
        std::ostringstream os;
        os << source_ << ":" << lineno_ << ":" << col << ": " << msg;
        throw ParseError(os.str(), lineno_, static_cast<int>(col));
    }

    std::string parse_key() {
        const std::size_t begin = pos_;
        while (!at_end() && key_char(peek())) ++pos_;
        if (pos_ == begin) fail("expected a key", pos_ + 1);
        return std::string(line_.substr(begin, pos_ - begin));
    }

    std::string parse_section_header() {
        sec_col_ = static_cast<int>(pos_) + 1;
        ++pos_; // '['
        skip_ws();
        const std::string name = parse_key();
        skip_ws();
        if (at_end() || peek() != ']') fail("expected ']' to close section header", pos_ + 1);
        ++pos_;
        return name;
    }

    void parse_key_value(KvList& into) {
        const std::size_t key_col = pos_ + 1;
        const std::string key = parse_key();
        for (auto& [k, v] : into)
            if (k == key) fail("duplicate key '" + key + "'", key_col);
        skip_ws();
        if (at_end() || peek() != '=') fail("expected '=' after key '" + key + "'", pos_ + 1);
        ++pos_;
        skip_ws();
        into.emplace_back(key, parse_value());
    }

    Value parse_value() {
        if (at_end()) fail("expected a value", pos_ + 1);
        Value v;
        v.line = lineno_;
        v.col = static_cast<int>(pos_) + 1;
        const char c = peek();
        if (c == '"') return parse_string(v);
        if (c == '[') return parse_array(v);
        if (c == '{') return parse_inline_table(v);
        if (line_.compare(pos_, 4, "true") == 0 && boundary_at(pos_ + 4)) {
            pos_ += 4;
            v.kind = Value::Kind::Bool;
            v.b = true;
            return v;
        }
        if (line_.compare(pos_, 5, "false") == 0 && boundary_at(pos_ + 5)) {
            pos_ += 5;
            v.kind = Value::Kind::Bool;
            v.b = false;
            return v;
        }
        return parse_number(v);
    }

    bool boundary_at(std::size_t p) const {
        return p >= line_.size() || !key_char(line_[p]);
    }

    Value parse_string(Value v) {
        ++pos_; // opening quote
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string", pos_ + 1);
            const char c = line_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("dangling escape in string", pos_ + 1);
                const char e = line_[pos_++];
                switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(std::string("unsupported escape '\\") + e + "'", pos_);
                }
            } else {
                out += c;
            }
        }
        v.kind = Value::Kind::Str;
        v.s = std::move(out);
        return v;
    }

    Value parse_array(Value v) {
        ++pos_; // '['
        v.kind = Value::Kind::Array;
        skip_ws();
        while (true) {
            if (at_end()) fail("unterminated array", pos_ + 1);
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            v.arr.push_back(parse_value());
            skip_ws();
            if (at_end()) fail("unterminated array", pos_ + 1);
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                continue; // trailing comma before ']' is fine
            }
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in array", pos_ + 1);
        }
    }

    Value parse_inline_table(Value v) {
        ++pos_; // '{'
        v.kind = Value::Kind::Table;
        skip_ws();
        if (!at_end() && peek() == '}') {
            ++pos_;
            return v;
        }
        while (true) {
            skip_ws();
            const std::size_t key_col = pos_ + 1;
            const std::string key = parse_key();
            for (auto& [k, x] : v.tbl)
                if (k == key) fail("duplicate key '" + key + "' in inline table", key_col);
            skip_ws();
            if (at_end() || peek() != '=')
                fail("expected '=' after key '" + key + "'", pos_ + 1);
            ++pos_;
            skip_ws();
            v.tbl.emplace_back(key, parse_value());
            skip_ws();
            if (at_end()) fail("unterminated inline table", pos_ + 1);
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == '}') {
                ++pos_;
                return v;
            }
            fail("expected ',' or '}' in inline table", pos_ + 1);
        }
    }

    Value parse_number(Value v) {
        const std::size_t begin = pos_;
        if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
        bool is_float = false;
        while (!at_end()) {
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                ++pos_;
                if ((c == 'e' || c == 'E') && !at_end() && (peek() == '+' || peek() == '-'))
                    ++pos_;
            } else {
                break;
            }
        }
        const std::string_view tok = line_.substr(begin, pos_ - begin);
        if (tok.empty() || tok == "+" || tok == "-") fail("expected a value", begin + 1);
        if (is_float) {
            double val = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), val);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                fail("malformed number '" + std::string(tok) + "'", begin + 1);
            v.kind = Value::Kind::Float;
            v.f = val;
        } else {
            std::int64_t val = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), val);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                fail("malformed integer '" + std::string(tok) + "'", begin + 1);
            v.kind = Value::Kind::Int;
            v.i = val;
        }
        return v;
    }
};

// ---- suggestions ----

std::size_t levenshtein(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key, const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& k : known) {
        const std::size_t d = levenshtein(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
    return best_d <= limit ? best : std::string{};
}

// ---- schema reader ----

class Issues {
public:
    void add(std::string field, std::string constraint) {
        list_.push_back({std::move(field), std::move(constraint)});
    }

    void throw_if_any() const {
        if (list_.empty()) return;
        std::string msg = "invalid config (" + std::to_string(list_.size()) + " problem" +
                          (list_.size() == 1 ? "" : "s") + "):";
        for (const auto& it : list_) msg += "\n  - " + it.to_string();
        throw ValidationError(msg, list_);
    }

private:
    std::vector<ValidationIssue> list_;
};

// Typed key consumption over one section's key/value list. `scope` prefixes
// field names in issue reports ("passage-bound.dt"); top level uses "".
class Reader {
public:
    Reader(const KvList* kv, std::string scope, Issues& issues)
        : kv_(kv), scope_(std::move(scope)), issues_(&issues) {}

    std::string field(const std::string& key) const {
        return scope_.empty() ? key : scope_ + "." + key;
    }

    const Value* find(const std::string& key) {
        if (!kv_) return nullptr;
        consumed_.push_back(key);
        for (const auto& [k, v] : *kv_)
            if (k == key) return &v;
        return nullptr;
    }

    // Numbers: integers promote to double, never the other way around.
    void get_double(const std::string& key, double& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Float)
            target = v->f;
        else if (v->kind == Value::Kind::Int)
            target = static_cast<double>(v->i);
        else
            issues_->add(field(key), "expected a number, got " + v->kind_name());
    }

    void get_int(const std::string& key, int& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Int)
            target = static_cast<int>(v->i);
        else
            issues_->add(field(key), "expected an integer, got " + v->kind_name());
    }

    void get_size(const std::string& key, std::size_t& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Int && v->i >= 0)
            target = static_cast<std::size_t>(v->i);
        else
            issues_->add(field(key), "expected a nonnegative integer");
    }

    void get_u64(const std::string& key, std::uint64_t& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Int && v->i >= 0)
            target = static_cast<std::uint64_t>(v->i);
        else
            issues_->add(field(key), "expected a nonnegative integer");
    }

    void get_bool(const std::string& key, bool& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Bool)
            target = v->b;
        else
            issues_->add(field(key), "expected true or false, got " + v->kind_name());
    }

    void get_string(const std::string& key, std::string& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind == Value::Kind::Str)
            target = v->s;
        else
            issues_->add(field(key), "expected a string, got " + v->kind_name());
    }

    bool number_of(const Value& v, double& out) {
        if (v.kind == Value::Kind::Float) {
            out = v.f;
            return true;
        }
        if (v.kind == Value::Kind::Int) {
            out = static_cast<double>(v.i);
            return true;
        }
        return false;
    }

    void get_double_array(const std::string& key, std::vector<double>& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind != Value::Kind::Array) {
            issues_->add(field(key), "expected an array of numbers");
            return;
        }
        std::vector<double> out;
        for (const auto& e : v->arr) {
            double x;
            if (!number_of(e, x)) {
                issues_->add(field(key), "expected an array of numbers");
                return;
            }
            out.push_back(x);
        }
        target = std::move(out);
    }

    void get_size_array(const std::string& key, std::vector<std::size_t>& target) {
        const Value* v = find(key);
        if (!v) return;
        if (v->kind != Value::Kind::Array) {
            issues_->add(field(key), "expected an array of positive integers");
            return;
        }
        std::vector<std::size_t> out;
        for (const auto& e : v->arr) {
            if (e.kind != Value::Kind::Int || e.i < 0) {
                issues_->add(field(key), "expected an array of positive integers");
                return;
            }
            out.push_back(static_cast<std::size_t>(e.i));
        }
        target = std::move(out);
    }

    const Value* get_table(const std::string& key) {
        const Value* v = find(key);
        if (!v) return nullptr;
        if (v->kind != Value::Kind::Table) {
            issues_->add(field(key), "expected an inline table, got " + v->kind_name());
            return nullptr;
        }
        return v;
    }

    // After all known keys were consumed: reject the rest with a suggestion.
    void reject_unknown() {
        if (!kv_) return;
        std::vector<std::string> known = consumed_;
        std::sort(known.begin(), known.end());
        known.erase(std::unique(known.begin(), known.end()), known.end());
        for (const auto& [k, v] : *kv_) {
            if (std::find(consumed_.begin(), consumed_.end(), k) != consumed_.end()) continue;
            const std::string near = nearest_key(k, known);
            std::string what = "unknown key";
            if (!near.empty()) what += "; did you mean '" + near + "'?";
            issues_->add(field(k), what);
        }
    }

private:
    const KvList* kv_; // nullptr = section absent
    std::string scope_;
    Issues* issues_;
    std::vector<std::string> consumed_;
};

VelocityKernel read_kernel(Reader& r, const std::string& key, Issues& issues,
                           VelocityKernel fallback) {
    const Value* t = r.get_table(key);
    if (!t) return fallback;
    Reader kr(&t->tbl, r.field(key), issues);
    std::string preset = fallback.name();
    double clip = fallback.clip() > 0.0 ? fallback.clip() : 1.0;
    kr.get_string("preset", preset);
    kr.get_double("clip", clip);
    kr.reject_unknown();
    if (preset != "zero" && preset != "neg_tanh" && preset != "clipped_linear") {
        issues.add(r.field(key) + ".preset",
                   "one of \"zero\", \"neg_tanh\", \"clipped_linear\"");
        return fallback;
    }
    if (preset == "clipped_linear" && !(clip > 0.0)) {
        issues.add(r.field(key) + ".clip", "> 0");
        return fallback;
    }
    return VelocityKernel::from_name(preset, clip);
}

DomainGeometry read_domain(Reader& r, Issues& issues, const DomainGeometry& fallback) {
    const Value* t = r.get_table("domain");
    if (!t) return fallback;
    Reader dr(&t->tbl, "domain", issues);
    std::string kind = "ball";
    double radius = 1.0, length = 1.0;
    int dim = 2;
    std::vector<double> center;
    dr.get_string("kind", kind);
    dr.get_double("radius", radius);
    dr.get_double("length", length);
    dr.get_int("dim", dim);
    dr.get_double_array("center", center);
    dr.reject_unknown();

    if (kind != "ball" && kind != "halfspace" && kind != "interval") {
        issues.add("domain.kind", "one of \"ball\", \"halfspace\", \"interval\"");
        return fallback;
    }
    if (kind == "ball") {
        if (!(radius > 0.0)) {
            issues.add("domain.radius", "> 0");
            return fallback;
        }
        if (dim < 1 || dim > kMaxDim) {
            issues.add("domain.dim", "between 1 and " + std::to_string(kMaxDim));
            return fallback;
        }
        if (center.empty()) center.assign(static_cast<std::size_t>(dim), 0.0);
        if (center.size() != static_cast<std::size_t>(dim)) {
            issues.add("domain.center", "length must equal domain.dim");
            return fallback;
        }
        return DomainGeometry::ball(center, radius);
    }
    if (kind == "halfspace") {
        if (dim < 1 || dim > kMaxDim) {
            issues.add("domain.dim", "between 1 and " + std::to_string(kMaxDim));
            return fallback;
        }
        return DomainGeometry::halfspace(dim);
    }
    if (!(length > 0.0)) {
        issues.add("domain.length", "> 0");
        return fallback;
    }
    return DomainGeometry::interval(length);
}

const KvList* find_section(const Document& doc, const std::string& name) {
    for (const auto& [n, kv] : doc.sections)
        if (n == name) return &kv;
    return nullptr;
}

ExperimentConfig build(const Document& doc, Issues& issues) {
    ExperimentConfig cfg = default_config();

    // ---- top level ----
    Reader top(&doc.top, "", issues);
    top.get_u64("seed", cfg.seed);
    top.get_string("out", cfg.out_dir);
    top.get_int("workers", cfg.workers);
    cfg.sim.domain = read_domain(top, issues, cfg.sim.domain);
    cfg.sim.d = cfg.sim.domain.dim();
    cfg.sim.kernel = read_kernel(top, "kernel", issues, cfg.sim.kernel);
    top.get_double("epsilon", cfg.sim.epsilon);
    top.get_double("sigma", cfg.sim.sigma);
    top.get_double("dt", cfg.sim.dt);
    top.get_double("T", cfg.sim.T);
    top.get_size("N", cfg.sim.N);
    top.get_int("max_reflections_per_step", cfg.sim.max_reflections_per_step);
    top.reject_unknown();

    if (cfg.out_dir.empty()) issues.add("out", "must not be empty");
    if (cfg.workers < 1) issues.add("workers", ">= 1");
    if (!(cfg.sim.epsilon > 0.0)) issues.add("epsilon", "> 0");
    if (!(cfg.sim.sigma >= 0.0)) issues.add("sigma", ">= 0");
    if (!(cfg.sim.dt > 0.0)) issues.add("dt", "> 0");
    if (!(cfg.sim.T > 0.0)) issues.add("T", "> 0");
    if (cfg.sim.N < 1) issues.add("N", ">= 1");
    if (cfg.sim.max_reflections_per_step < 1) issues.add("max_reflections_per_step", ">= 1");

    // ---- [initial] ----
    {
        Reader r(find_section(doc, "initial"), "initial", issues);
        std::string position = "uniform", velocity = "gaussian";
        r.get_string("position", position);
        r.get_double("margin", cfg.sim.initial.beta_star);
        r.get_double_array("point", cfg.sim.initial.pos_point);
        r.get_string("velocity", velocity);
        r.get_double_array("mean", cfg.sim.initial.vel_mean);
        r.get_double("stddev", cfg.sim.initial.vel_stddev);
        r.get_double_array("vel_point", cfg.sim.initial.vel_point);
        r.reject_unknown();

        if (position == "uniform")
            cfg.sim.initial.pos_kind = InitialLawSpec::PosKind::UniformMargin;
        else if (position == "point")
            cfg.sim.initial.pos_kind = InitialLawSpec::PosKind::Point;
        else
            issues.add("initial.position", "one of \"uniform\", \"point\"");
        if (velocity == "gaussian")
            cfg.sim.initial.vel_kind = InitialLawSpec::VelKind::Gaussian;
        else if (velocity == "point")
            cfg.sim.initial.vel_kind = InitialLawSpec::VelKind::Point;
        else
            issues.add("initial.velocity", "one of \"gaussian\", \"point\"");

        if (!(cfg.sim.initial.beta_star >= 0.0)) issues.add("initial.margin", ">= 0");
        if (!(cfg.sim.initial.vel_stddev >= 0.0)) issues.add("initial.stddev", ">= 0");
        const auto want = static_cast<std::size_t>(cfg.sim.d);
        if (cfg.sim.initial.pos_kind == InitialLawSpec::PosKind::Point &&
            cfg.sim.initial.pos_point.size() != want)
            issues.add("initial.point", "length must equal the domain dimension");
        if (!cfg.sim.initial.vel_mean.empty() && cfg.sim.initial.vel_mean.size() != want)
            issues.add("initial.mean", "length must equal the domain dimension");
        if (cfg.sim.initial.vel_kind == InitialLawSpec::VelKind::Point &&
            cfg.sim.initial.vel_point.size() != want)
            issues.add("initial.vel_point", "length must equal the domain dimension");
    }

    // ---- [simulate] ----
    {
        Reader r(find_section(doc, "simulate"), "simulate", issues);
        r.get_bool("record_events", cfg.simulate.record_events);
        r.get_double_array("checkpoints", cfg.simulate.checkpoints);
        r.reject_unknown();
        for (double tc : cfg.simulate.checkpoints)
            if (!(tc >= 0.0) || tc > cfg.sim.T + 1e-12) {
                issues.add("simulate.checkpoints", "every time must lie in [0, T]");
                break;
            }
    }

    // ---- [invariance-test] (no keys of its own) ----
    {
        Reader r(find_section(doc, "invariance-test"), "invariance-test", issues);
        r.reject_unknown();
    }

    // ---- [passage-bound] ----
    {
        Reader r(find_section(doc, "passage-bound"), "passage-bound", issues);
        auto& p = cfg.passage;
        r.get_double("y", p.y);
        r.get_double("v", p.v);
        r.get_double("T", p.T);
        r.get_double("beta_star", p.beta_star);
        r.get_double("dt", p.dt);
        r.get_int("n_max", p.n_max);
        r.get_size("paths", p.paths);
        r.reject_unknown();
        if (!(p.y > 0.0)) issues.add("passage-bound.y", "> 0");
        if (!(p.T > 0.0)) issues.add("passage-bound.T", "> 0");
        if (!(p.beta_star > 0.0)) issues.add("passage-bound.beta_star", "> 0");
        if (!(p.dt > 0.0)) issues.add("passage-bound.dt", "> 0");
        if (p.n_max < 1) issues.add("passage-bound.n_max", ">= 1");
        if (p.paths < 1) issues.add("passage-bound.paths", ">= 1");
        if (p.y > 0.0 && p.beta_star > 0.0 && p.y < p.beta_star)
            issues.add("passage-bound.y", ">= beta_star (the bound needs the margin)");
    }

    // ---- [chaos-study] ----
    {
        Reader r(find_section(doc, "chaos-study"), "chaos-study", issues);
        auto& p = cfg.chaos;
        r.get_size_array("N_grid", p.N_grid);
        r.get_int("seeds", p.seeds);
        r.get_string("functional", p.functional);
        r.get_double("length", p.length);
        r.get_double("margin", p.margin);
        r.get_double("epsilon", p.epsilon);
        r.get_double("dt", p.dt);
        r.get_double("T", p.T);
        r.get_double("sigma", p.sigma);
        r.get_double("vel_stddev", p.vel_stddev);
        r.reject_unknown();
        if (p.N_grid.empty()) issues.add("chaos-study.N_grid", "must not be empty");
        for (std::size_t n : p.N_grid)
            if (n < 2) {
                issues.add("chaos-study.N_grid", "every N must be >= 2");
                break;
            }
        if (p.seeds < 1) issues.add("chaos-study.seeds", ">= 1");
        if (p.functional != "tanh_u1" && p.functional != "capped_jumps")
            issues.add("chaos-study.functional", "one of \"tanh_u1\", \"capped_jumps\"");
        if (!(p.length > 0.0)) issues.add("chaos-study.length", "> 0");
        if (!(p.margin >= 0.0) || p.margin >= p.length / 2.0)
            issues.add("chaos-study.margin", "in [0, length/2)");
        if (!(p.epsilon > 0.0)) issues.add("chaos-study.epsilon", "> 0");
        if (!(p.dt > 0.0)) issues.add("chaos-study.dt", "> 0");
        if (!(p.T > 0.0)) issues.add("chaos-study.T", "> 0");
        if (!(p.sigma >= 0.0)) issues.add("chaos-study.sigma", ">= 0");
        if (!(p.vel_stddev >= 0.0)) issues.add("chaos-study.vel_stddev", ">= 0");
    }

    // ---- [epsilon-study] ----
    {
        Reader r(find_section(doc, "epsilon-study"), "epsilon-study", issues);
        auto& p = cfg.epsilon_study;
        r.get_double_array("epsilons", p.epsilons);
        r.get_double("epsilon_ref", p.epsilon_ref);
        r.get_int("seeds", p.seeds);
        r.get_size("N", p.N);
        r.get_double("length", p.length);
        r.get_double("margin", p.margin);
        r.get_double("dt", p.dt);
        r.get_double("T", p.T);
        r.get_double("sigma", p.sigma);
        r.get_double("vel_mean", p.vel_mean);
        r.get_double("vel_stddev", p.vel_stddev);
        p.kernel = read_kernel(r, "kernel", issues, p.kernel);
        r.reject_unknown();
        if (p.epsilons.empty()) issues.add("epsilon-study.epsilons", "must not be empty");
        for (double e : p.epsilons)
            if (!(e > 0.0)) {
                issues.add("epsilon-study.epsilons", "every width must be > 0");
                break;
            }
        if (!(p.epsilon_ref > 0.0)) issues.add("epsilon-study.epsilon_ref", "> 0");
        if (p.seeds < 1) issues.add("epsilon-study.seeds", ">= 1");
        if (p.N < 2) issues.add("epsilon-study.N", ">= 2");
        if (!(p.length > 0.0)) issues.add("epsilon-study.length", "> 0");
        if (!(p.margin >= 0.0) || p.margin >= p.length / 2.0)
            issues.add("epsilon-study.margin", "in [0, length/2)");
        if (!(p.dt > 0.0)) issues.add("epsilon-study.dt", "> 0");
        if (!(p.T > 0.0)) issues.add("epsilon-study.T", "> 0");
        if (!(p.sigma >= 0.0)) issues.add("epsilon-study.sigma", ">= 0");
        if (!(p.vel_stddev >= 0.0)) issues.add("epsilon-study.vel_stddev", ">= 0");
    }

    // ---- [no-permeability] ----
    {
        Reader r(find_section(doc, "no-permeability"), "no-permeability", issues);
        r.get_double_array("deltas", cfg.no_permeability.deltas);
        r.reject_unknown();
        if (cfg.no_permeability.deltas.empty())
            issues.add("no-permeability.deltas", "must not be empty");
        for (double dl : cfg.no_permeability.deltas)
            if (!(dl > 0.0)) {
                issues.add("no-permeability.deltas", "every shell width must be > 0");
                break;
            }
    }

    // ---- [hit-rate] ----
    {
        Reader r(find_section(doc, "hit-rate"), "hit-rate", issues);
        r.get_int("seeds", cfg.hit_rate.seeds);
        r.reject_unknown();
        if (cfg.hit_rate.seeds < 1) issues.add("hit-rate.seeds", ">= 1");
    }

    // ---- [drift-consistency] ----
    {
        Reader r(find_section(doc, "drift-consistency"), "drift-consistency", issues);
        auto& p = cfg.drift_consistency;
        r.get_size_array("schedule_N", p.schedule_N);
        r.get_double_array("schedule_epsilon", p.schedule_epsilon);
        r.get_int("seeds", p.seeds);
        r.get_double("radius", p.radius);
        r.get_int("dim", p.dim);
        r.get_double_array("vel_mean", p.vel_mean);
        r.get_double_array("query", p.query);
        p.kernel = read_kernel(r, "kernel", issues, p.kernel);
        r.reject_unknown();
        if (p.schedule_N.empty() || p.schedule_N.size() != p.schedule_epsilon.size())
            issues.add("drift-consistency.schedule_N",
                       "schedule_N and schedule_epsilon need equal nonzero lengths");
        for (std::size_t n : p.schedule_N)
            if (n < 1) {
                issues.add("drift-consistency.schedule_N", "every N must be >= 1");
                break;
            }
        for (double e : p.schedule_epsilon)
            if (!(e > 0.0)) {
                issues.add("drift-consistency.schedule_epsilon", "every width must be > 0");
                break;
            }
        if (p.seeds < 1) issues.add("drift-consistency.seeds", ">= 1");
        if (!(p.radius > 0.0)) issues.add("drift-consistency.radius", "> 0");
        if (p.dim < 1 || p.dim > kMaxDim)
            issues.add("drift-consistency.dim", "between 1 and " + std::to_string(kMaxDim));
        else {
            const auto want = static_cast<std::size_t>(p.dim);
            if (p.vel_mean.size() != want)
                issues.add("drift-consistency.vel_mean", "length must equal dim");
            if (!p.query.empty() && p.query.size() != want)
                issues.add("drift-consistency.query", "length must equal dim (or omit)");
        }
    }

    // ---- unknown sections ----
    {
        static const std::vector<std::string> known = {
            "initial",       "simulate",      "invariance-test",
            "passage-bound", "chaos-study",   "epsilon-study",
            "no-permeability", "hit-rate",    "drift-consistency"};
        for (const auto& [name, kv] : doc.sections) {
            if (std::find(known.begin(), known.end(), name) != known.end()) continue;
            const std::string near = nearest_key(name, known);
            std::string what = "unknown section";
            if (!near.empty()) what += "; did you mean '" + near + "'?";
            issues.add("[" + name + "]", what);
        }
    }

    cfg.sim.seed = cfg.seed;
    cfg.sim.workers = cfg.workers;
    return cfg;
}

} // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.sim.N = 50000;
    cfg.sim.d = 2;
    cfg.sim.domain = DomainGeometry::ball({0.0, 0.0}, 1.0);
    cfg.sim.epsilon = 0.2;
    cfg.sim.dt = 1e-3;
    cfg.sim.T = 1.0;
    cfg.sim.sigma = 1.0;
    cfg.sim.kernel = VelocityKernel::zero();
    cfg.sim.initial = InitialLawSpec{};
    cfg.sim.seed = cfg.seed;
    cfg.sim.workers = cfg.workers;
    return cfg;
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source) {
    LineParser parser(text, source);
    const Document doc = parser.parse();
    Issues issues;
    ExperimentConfig cfg = build(doc, issues);
    issues.throw_if_any();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

} // namespace lagrmc
