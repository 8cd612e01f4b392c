#include <hosc/hosc.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "composite.hpp"
#include "equiv.hpp"
#include "json.hpp"
#include "synth.hpp"

using namespace hosc;
using json = nlohmann::json;

struct hosc_term {
    TermFile file;
};

struct hosc_traceset {
    Model model;
    std::size_t depth;
    TermTraces traces;
    std::vector<Trace> ambient;  // per assignment
    std::vector<std::pair<std::size_t, std::size_t>> flat;
};

struct hosc_session {
    Model model;
    std::vector<mpz_class> ints;
    std::size_t fuel;
    Config cfg;
    Trace trace;
    std::vector<OMove> moves;
    bool finished = false;
    std::string end;
};

/* --- Thread-local error message buffer --- */

static thread_local std::string tl_error;

static hosc_status fail(hosc_status st, const std::string& msg) {
    tl_error = msg;
    return st;
}

static char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

#define HOSC_NULL_CHECK(p) \
    do { if (!(p)) return fail(HOSC_ERR_NULL, "null pointer: " #p); } while (0)

/* Runs `body`, translating library exceptions into status codes. */
template <class F>
static hosc_status guarded(F&& body) {
    try {
        return body();
    } catch (const SyntaxError& e) {
        return fail(HOSC_ERR_PARSE, e.what());
    } catch (const BundleError& e) {
        return fail(HOSC_ERR_PARSE, "line " + std::to_string(e.line) + ": " + e.what());
    } catch (const TypeError& e) {
        return fail(HOSC_ERR_TYPE, e.what());
    } catch (const SynthError& e) {
        return fail(HOSC_ERR_PRECONDITION, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(HOSC_ERR_MISMATCH, e.what());
    } catch (const std::exception& e) {
        return fail(HOSC_ERR_INTERNAL, e.what());
    }
}

static Model to_model(hosc_model m) {
    switch (m) {
        case HOSC_MODEL_GOSC: return Model::GOSC;
        case HOSC_MODEL_HOS: return Model::HOS;
        case HOSC_MODEL_GOS: return Model::GOS;
        default: return Model::HOSC;
    }
}

static bool valid_model(hosc_model m) { return m >= HOSC_MODEL_HOSC && m <= HOSC_MODEL_GOS; }

static hosc_status to_bounds(const hosc_bounds* in, Bounds& out) {
    hosc_bounds d;
    hosc_bounds_default(&d);
    const hosc_bounds& b = in ? *in : d;
    if (b.int_lo > b.int_hi) return fail(HOSC_ERR_ARG, "empty integer range");
    if (b.fuel == 0) return fail(HOSC_ERR_ARG, "fuel must be positive");
    out.depth = b.depth;
    out.fuel = b.fuel;
    out.ints = int_range(b.int_lo, b.int_hi);
    out.exhaustive = b.exhaustive != 0;
    return HOSC_OK;
}

/* One report line, rendered either as text or as one JSON record. */
struct Report {
    std::vector<std::pair<std::string, json>> lines;

    void add(std::string text, json record) { lines.emplace_back(std::move(text), std::move(record)); }

    std::string render(hosc_format fmt) const {
        std::string out;
        for (const auto& [text, rec] : lines) {
            out += fmt == HOSC_FORMAT_RECORD ? rec.dump() : text;
            out += '\n';
        }
        return out;
    }
};

static void add_ambient(Report& r, const Trace& t) {
    for (const Name& n : t.ambient_o) r.add("ambient O " + show_name(n), {{"ambient", "O"}, {"name", show_name(n)}});
    for (const Name& n : t.ambient_p) r.add("ambient P " + show_name(n), {{"ambient", "P"}, {"name", show_name(n)}});
}

static void add_trace(Report& r, const Trace& t, const std::string& note, json extra = json::object()) {
    std::string key = trace_key(t);
    std::string text = key.empty() ? "# <empty trace>" : key;
    if (!note.empty()) text += (key.empty() ? " " : "  # ") + note;
    json rec = {{"trace", key}, {"length", t.size()}};
    if (!note.empty()) rec["note"] = note;
    rec.update(extra);
    r.add(text, rec);
}

static std::string show_assignment(const Assignment& rho) {
    std::string out;
    for (const auto& [x, a] : rho) {
        if (!out.empty()) out += ", ";
        out += x + " = " + show_aval(a);
    }
    return out;
}

static Config term_config(const hosc_term* t, Model m, const std::vector<mpz_class>& ints) {
    return init_term_config(t->file.term, t->file.gamma, t->file.type, m, ints);
}

static hosc_status require_cr_free(const hosc_term* t) {
    TypeEnv env{{}, t->file.gamma};
    if (!check_cr_free(env, t->file.term, t->file.type))
        return fail(HOSC_ERR_NOT_CR_FREE,
                    "the term is not cr-free: it mentions a location or continuation literal, or its interface "
                    "types involve ref or cont");
    return HOSC_OK;
}

extern "C" {

HOSC_API const char* hosc_version(void) { return "1.0.0"; }

HOSC_API const char* hosc_last_error(void) { return tl_error.c_str(); }

HOSC_API void hosc_string_free(char* s) { std::free(s); }

HOSC_API void hosc_bounds_default(hosc_bounds* b) {
    if (!b) return;
    b->depth = 8;
    b->fuel = kDefaultFuel;
    b->int_lo = 0;
    b->int_hi = 1;
    b->exhaustive = 0;
}

HOSC_API hosc_status hosc_parse_model(const char* text, hosc_model* out) {
    HOSC_NULL_CHECK(text);
    HOSC_NULL_CHECK(out);
    Model m;
    if (!parse_model(text, m)) return fail(HOSC_ERR_ARG, std::string("unknown model: ") + text);
    switch (m) {
        case Model::HOSC: *out = HOSC_MODEL_HOSC; break;
        case Model::GOSC: *out = HOSC_MODEL_GOSC; break;
        case Model::HOS: *out = HOSC_MODEL_HOS; break;
        case Model::GOS: *out = HOSC_MODEL_GOS; break;
    }
    return HOSC_OK;
}

HOSC_API const char* hosc_model_name(hosc_model m) {
    static const char* names[] = {"HOSC", "GOSC", "HOS", "GOS"};
    return valid_model(m) ? names[m] : "?";
}

/* ---- terms ---- */

HOSC_API hosc_status hosc_term_parse(const char* text, hosc_term** out) {
    HOSC_NULL_CHECK(text);
    HOSC_NULL_CHECK(out);
    *out = nullptr;
    return guarded([&] {
        auto t = std::make_unique<hosc_term>();
        t->file = parse_term_file(text);
        *out = t.release();
        return HOSC_OK;
    });
}

HOSC_API void hosc_term_free(hosc_term* t) { delete t; }

HOSC_API hosc_status hosc_term_show(const hosc_term* t, char** out) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(out);
    *out = dup(show_term(t->file.term));
    return HOSC_OK;
}

HOSC_API hosc_status hosc_term_type(const hosc_term* t, char** out) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(out);
    *out = dup(show_type(t->file.type));
    return HOSC_OK;
}

HOSC_API hosc_status hosc_term_fragments(const hosc_term* t, unsigned* mask) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(mask);
    return guarded([&] {
        TypeEnv env{{}, t->file.gamma};
        *mask = 0;
        for (Model m : kAllModels)
            if (term_in_fragment(env, t->file.term, m)) *mask |= 1u << static_cast<unsigned>(m);
        return HOSC_OK;
    });
}

HOSC_API hosc_status hosc_term_check_report(const hosc_term* t, hosc_format fmt, char** out) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(out);
    return guarded([&] {
        TypeEnv env{{}, t->file.gamma};
        Report r;
        std::string gamma;
        for (const auto& [x, ty] : t->file.gamma) {
            if (!gamma.empty()) gamma += ", ";
            gamma += x + " : " + show_type(ty);
        }
        r.add("context " + (gamma.empty() ? std::string("(empty)") : gamma), {{"context", gamma}});
        r.add("type " + show_type(t->file.type), {{"type", show_type(t->file.type)}});
        bool cr = check_cr_free(env, t->file.term, t->file.type);
        r.add(std::string("cr-free ") + (cr ? "yes" : "no"), {{"cr_free", cr}});
        std::string frags;
        json list = json::array();
        for (Model m : kAllModels)
            if (term_in_fragment(env, t->file.term, m)) {
                frags += (frags.empty() ? "" : " ") + model_name(m);
                list.push_back(model_name(m));
            }
        r.add("fragments " + (frags.empty() ? std::string("none") : frags), {{"fragments", list}});
        *out = dup(r.render(fmt));
        return HOSC_OK;
    });
}

/* ---- trace sets ---- */

HOSC_API hosc_status hosc_traces(const hosc_term* t, hosc_model m, const hosc_bounds* b, hosc_traceset** out) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(out);
    *out = nullptr;
    if (!valid_model(m)) return fail(HOSC_ERR_ARG, "unknown model");
    Bounds bounds;
    if (hosc_status st = to_bounds(b, bounds)) return st;
    if (hosc_status st = require_cr_free(t)) return st;
    return guarded([&] {
        auto s = std::make_unique<hosc_traceset>();
        s->model = to_model(m);
        s->depth = bounds.depth;
        s->traces = term_traces(t->file.term, t->file.gamma, t->file.type, s->model, bounds);
        for (std::size_t i = 0; i < s->traces.sets.size(); ++i) {
            const TraceSet& ts = s->traces.sets[i];
            s->ambient.push_back(ts.entries.empty() ? Trace{} : ts.entries.front().trace.prefix(0));
            for (std::size_t j = 0; j < ts.entries.size(); ++j) s->flat.emplace_back(i, j);
        }
        *out = s.release();
        return HOSC_OK;
    });
}

HOSC_API void hosc_traceset_free(hosc_traceset* s) { delete s; }

HOSC_API size_t hosc_traceset_size(const hosc_traceset* s) { return s ? s->flat.size() : 0; }

HOSC_API hosc_status hosc_traceset_get(const hosc_traceset* s, size_t i, char** trace, char** status) {
    HOSC_NULL_CHECK(s);
    if (i >= s->flat.size()) return fail(HOSC_ERR_ARG, "trace index out of range");
    const TraceEntry& e = s->traces.sets[s->flat[i].first].entries[s->flat[i].second];
    if (trace) *trace = dup(show_trace(e.trace));
    if (status) *status = dup(terminal_name(e.status));
    return HOSC_OK;
}

HOSC_API hosc_status hosc_traceset_contains(const hosc_traceset* s, const char* trace, int* out) {
    HOSC_NULL_CHECK(s);
    HOSC_NULL_CHECK(trace);
    HOSC_NULL_CHECK(out);
    return guarded([&] {
        Trace t = parse_trace(trace);
        *out = 0;
        for (const TraceSet& ts : s->traces.sets) {
            std::set<Name> fixed;
            if (!ts.entries.empty()) {
                const Trace& a = ts.entries.front().trace;
                fixed.insert(a.ambient_o.begin(), a.ambient_o.end());
                fixed.insert(a.ambient_p.begin(), a.ambient_p.end());
            }
            if (ts.contains(canonicalize(t, fixed))) *out = 1;
        }
        return HOSC_OK;
    });
}

HOSC_API hosc_status hosc_traceset_report(const hosc_traceset* s, hosc_format fmt, char** out) {
    HOSC_NULL_CHECK(s);
    HOSC_NULL_CHECK(out);
    return guarded([&] {
        Report r;
        r.add("# " + model_name(s->model) + " traces up to depth " + std::to_string(s->depth) + ": " +
                  std::to_string(s->flat.size()),
              {{"model", model_name(s->model)}, {"depth", s->depth}, {"count", s->flat.size()}});
        for (std::size_t i = 0; i < s->traces.sets.size(); ++i) {
            const Assignment& rho = s->traces.rhos[i];
            if (!rho.empty())
                r.add("# assignment " + show_assignment(rho), {{"assignment", show_assignment(rho)}});
            add_ambient(r, s->ambient[i]);
            for (const TraceEntry& e : s->traces.sets[i].entries)
                add_trace(r, e.trace, terminal_name(e.status), {{"status", terminal_name(e.status)}});
        }
        *out = dup(r.render(fmt));
        return HOSC_OK;
    });
}

HOSC_API hosc_status hosc_derivation(const hosc_term* t, hosc_model m, const char* trace, size_t fuel,
                                     hosc_format fmt, char** out, int* ok) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(trace);
    HOSC_NULL_CHECK(out);
    if (!valid_model(m)) return fail(HOSC_ERR_ARG, "unknown model");
    if (hosc_status st = require_cr_free(t)) return st;
    return guarded([&] {
        Trace want = parse_trace(trace);
        Config start = term_config(t, to_model(m), int_range(0, 1));
        Replay rp = replay(start, want, fuel ? fuel : kDefaultFuel);
        Report r;
        for (std::size_t i = 0; i < rp.rows.size(); ++i) {
            const DerivationRow& row = rp.rows[i];
            std::string cfg = show_config(row.config);
            std::string text = i == 0 ? "C = " + cfg : "--" + row.label + "--> " + cfg;
            r.add(text, {{"row", i}, {"label", row.label}, {"config", cfg}, {"heap", show_heap(row.config.heap)}});
        }
        if (rp.ok) {
            r.add("# derivation complete", {{"ok", true}});
        } else {
            r.add("# derivation fails at action " + std::to_string(rp.failed_at) + ": " + rp.reason,
                  {{"ok", false}, {"failed_at", rp.failed_at}, {"reason", rp.reason}});
        }
        if (ok) *ok = rp.ok ? 1 : 0;
        *out = dup(r.render(fmt));
        return HOSC_OK;
    });
}

/* ---- traces ---- */

HOSC_API hosc_status hosc_trace_check(const char* trace, const char* predicate, int* holds, int* violation) {
    HOSC_NULL_CHECK(trace);
    HOSC_NULL_CHECK(predicate);
    HOSC_NULL_CHECK(holds);
    return guarded([&] {
        Predicate p;
        if (!parse_predicate(predicate, p)) return fail(HOSC_ERR_ARG, std::string("unknown predicate: ") + predicate);
        Trace t = parse_trace(trace);
        WellFormed wf = check_well_formed(t);
        if (!wf.ok) return fail(HOSC_ERR_PARSE, "ill-formed trace: " + wf.reason);
        PredicateResult res = check_predicate(t, p);
        *holds = res.holds ? 1 : 0;
        if (violation) *violation = res.violation;
        return HOSC_OK;
    });
}

HOSC_API hosc_status hosc_trace_dual_with_err(const char* trace, char** out) {
    HOSC_NULL_CHECK(trace);
    HOSC_NULL_CHECK(out);
    return guarded([&] {
        *out = dup(show_trace(dual_with_err(parse_trace(trace))));
        return HOSC_OK;
    });
}

/* ---- equivalence ---- */

static hosc_status same_interface(const hosc_term* a, const hosc_term* b) {
    if (a->file.type != b->file.type)
        return fail(HOSC_ERR_MISMATCH, "the terms have different types: " + show_type(a->file.type) + " and " +
                                           show_type(b->file.type));
    if (a->file.gamma != b->file.gamma) return fail(HOSC_ERR_MISMATCH, "the terms declare different #gamma contexts");
    return HOSC_OK;
}

static hosc_status run_equiv(const hosc_term* a, const hosc_term* b, hosc_model m, const hosc_bounds* bounds,
                             int complete_only, EquivResult& res, Bounds& bd) {
    HOSC_NULL_CHECK(a);
    HOSC_NULL_CHECK(b);
    if (!valid_model(m)) return fail(HOSC_ERR_ARG, "unknown model");
    if (hosc_status st = to_bounds(bounds, bd)) return st;
    if (hosc_status st = require_cr_free(a)) return st;
    if (hosc_status st = require_cr_free(b)) return st;
    if (hosc_status st = same_interface(a, b)) return st;
    return guarded([&] {
        res = compare_terms(a->file.term, b->file.term, a->file.gamma, a->file.type, to_model(m), bd,
                            complete_only != 0);
        return HOSC_OK;
    });
}

HOSC_API hosc_status hosc_equiv(const hosc_term* a, const hosc_term* b, hosc_model m, const hosc_bounds* bounds,
                                int complete_only, hosc_equiv_result* out) {
    HOSC_NULL_CHECK(out);
    out->witness_left = out->witness_right = nullptr;
    EquivResult res;
    Bounds bd;
    if (hosc_status st = run_equiv(a, b, m, bounds, complete_only, res, bd)) return st;
    out->verdict = res.verdict == Verdict::Distinct ? HOSC_DISTINCT : HOSC_EQUIVALENT_UP_TO_DEPTH;
    if (res.left_in_right.witness) out->witness_left = dup(show_trace(*res.left_in_right.witness));
    if (res.right_in_left.witness) out->witness_right = dup(show_trace(*res.right_in_left.witness));
    return HOSC_OK;
}

HOSC_API void hosc_equiv_result_clear(hosc_equiv_result* r) {
    if (!r) return;
    std::free(r->witness_left);
    std::free(r->witness_right);
    r->witness_left = r->witness_right = nullptr;
}

HOSC_API hosc_status hosc_equiv_report(const hosc_term* a, const hosc_term* b, hosc_model m,
                                       const hosc_bounds* bounds, int complete_only, hosc_format fmt, char** out,
                                       hosc_verdict* verdict) {
    HOSC_NULL_CHECK(out);
    EquivResult res;
    Bounds bd;
    if (hosc_status st = run_equiv(a, b, m, bounds, complete_only, res, bd)) return st;
    return guarded([&] {
        Report r;
        std::string v = verdict_name(res.verdict);
        r.add("verdict " + v, {{"verdict", v}});
        r.add("# model " + model_name(res.model) + ", depth " + std::to_string(res.depth) +
                  (res.complete_only ? ", complete traces only" : ""),
              {{"model", model_name(res.model)}, {"depth", res.depth}, {"complete_only", res.complete_only}});
        bool shown_ambient = false;
        auto witness = [&](const Inclusion& inc, int side) {
            if (!inc.witness) return;
            if (bd.exhaustive) {
                NameAlloc al;
                Assignment rho = all_assignments(a->file.gamma, bd.ints, al).at(inc.rho);
                r.add("# assignment " + show_assignment(rho), {{"assignment", show_assignment(rho)}});
                shown_ambient = false;
            }
            if (!shown_ambient) add_ambient(r, inc.witness->prefix(0));
            shown_ambient = true;
            std::string note = side == 1 ? "only the first term has this trace" : "only the second term has this trace";
            add_trace(r, *inc.witness, note, {{"only_in", side}});
        };
        witness(res.left_in_right, 1);
        witness(res.right_in_left, 2);
        if (verdict) *verdict = res.verdict == Verdict::Distinct ? HOSC_DISTINCT : HOSC_EQUIVALENT_UP_TO_DEPTH;
        *out = dup(r.render(fmt));
        return HOSC_OK;
    });
}

/* ---- composition ---- */

HOSC_API hosc_status hosc_compose(const hosc_term* t, const char* bundle, hosc_observation kind, size_t fuel,
                                  int audit, hosc_format fmt, char** out, int* observed) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(bundle);
    HOSC_NULL_CHECK(out);
    if (hosc_status st = require_cr_free(t)) return st;
    if (fuel == 0) fuel = kDefaultFuel;
    return guarded([&] {
        Bundle b = parse_bundle(bundle);
        if (b.input.hole != t->file.type)
            return fail(HOSC_ERR_MISMATCH, "the context's hole has type " + show_type(b.input.hole) +
                                               " but the term has type " + show_type(t->file.type));
        Config term_side = term_config(t, Model::HOSC, int_range(0, 1));
        Config ctx_side = init_context_config(b.input, term_side.cont);
        CompositeConfig d = merge(term_side, ctx_side);
        Observation obs = kind == HOSC_OBSERVE_ERR ? Observation::Err : Observation::Ter;
        CompositeRun run = composite_run(d, empty_trace_of(term_side), fuel, true, audit != 0);
        bool yes = obs == Observation::Ter ? run.end == CompositeEnd::Final : run.end == CompositeEnd::Err;
        auto [m0, h0] = theta(d);
        bool plain = observes(m0, h0, obs, fuel * 4);

        Report r;
        std::string what = obs == Observation::Ter ? "terminates" : "errors";
        r.add(std::string("verdict ") + (yes ? "yes" : "no") + " (" + what + ")",
              {{"verdict", yes ? "yes" : "no"}, {"observation", obs == Observation::Ter ? "ter" : "err"}});
        r.add("# end " + composite_end_name(run.end) + ", " + std::to_string(run.steps) + " composite steps, " +
                  std::to_string(run.tau_steps) + " internal",
              {{"end", composite_end_name(run.end)}, {"steps", run.steps}, {"tau_steps", run.tau_steps}});
        add_ambient(r, run.trace.prefix(0));
        add_trace(r, run.trace, "boundary trace");
        r.add(std::string("# theta bisimulation ") + (run.bisimulation_ok ? "holds" : "fails: " + run.discrepancy),
              {{"bisimulation", run.bisimulation_ok}, {"discrepancy", run.discrepancy}});
        r.add(std::string("# validity ") + (run.validity_ok ? "holds" : "fails"), {{"validity", run.validity_ok}});
        r.add(std::string("# closed program ") + (plain ? "agrees" : "disagrees") + ": " + (plain ? "yes" : "no"),
              {{"closed_program", plain ? "yes" : "no"}, {"agrees", plain == yes}});
        for (std::size_t i = 0; i < run.audit.size(); ++i)
            r.add("# theta " + std::to_string(i) + ": " + run.audit[i], {{"theta", i}, {"image", run.audit[i]}});
        if (observed) *observed = yes ? 1 : 0;
        *out = dup(r.render(fmt));
        return HOSC_OK;
    });
}

/* ---- synthesis ---- */

HOSC_API hosc_status hosc_synthesize(const char* trace, hosc_model m, const char* answer_type, size_t fuel,
                                     hosc_format fmt, char** bundle, char** report, int* verified) {
    HOSC_NULL_CHECK(trace);
    HOSC_NULL_CHECK(bundle);
    HOSC_NULL_CHECK(report);
    if (!valid_model(m)) return fail(HOSC_ERR_ARG, "unknown model");
    *bundle = *report = nullptr;
    return guarded([&] {
        Trace t = parse_trace(trace);
        Report r;
        std::string how;
        // A trace seen from the term's side is turned around first.
        if (!t.acts.empty() && t.acts.front().pol == Pol::P) {
            bool odd = t.size() % 2 == 1;
            t = odd ? dual_with_err(t) : dualize(t);
            how = odd ? "dualized and closed with an error question" : "dualized";
        }
        SynthOptions opt;
        if (answer_type) opt.answer = parse_type(answer_type);
        Model model = to_model(m);
        SynthResult res = synthesize_context(t, model, opt);
        SynthReport rep = verify_synthesis(t, model, res, fuel ? fuel : kDefaultFuel);
        r.add(std::string("verified ") + (rep.ok ? "yes" : "no"), {{"verified", rep.ok}});
        if (!how.empty()) r.add("# input " + how, {{"input", how}});
        r.add("# model " + model_name(model) + ", answer type " + show_type(res.answer) + ", " +
                  std::to_string(rep.expected) + " even prefixes expected, " + std::to_string(rep.found) + " found",
              {{"model", model_name(model)},
               {"answer", show_type(res.answer)},
               {"expected", rep.expected},
               {"found", rep.found}});
        r.add(std::string("# exact ") + (rep.exact ? "yes" : "no"), {{"exact", rep.exact}});
        r.add(std::string("# fragment ") + (rep.fragment_ok ? "yes" : "no"), {{"fragment", rep.fragment_ok}});
        r.add(std::string("# determinate ") + (rep.determinate ? "yes" : "no"), {{"determinate", rep.determinate}});
        if (!rep.missing.empty() || !rep.extra.empty()) add_ambient(r, res.trace.prefix(0));
        for (const Trace& x : rep.missing) add_trace(r, x, "missing", {{"kind", "missing"}});
        for (const Trace& x : rep.extra) add_trace(r, x, "extra", {{"kind", "extra"}});
        for (const std::string& n : rep.notes) r.add("# note " + n, {{"note", n}});
        *bundle = dup(show_bundle(Bundle{to_context_input(res), res.cell_names}));
        *report = dup(r.render(fmt));
        if (verified) *verified = rep.ok ? 1 : 0;
        return HOSC_OK;
    });
}

/* ---- interactive play ---- */

static void session_refresh(hosc_session* s) {
    s->moves.clear();
    if (s->finished || s->cfg.active) return;
    s->moves = enumerate_o_moves(s->cfg, s->ints);
    if (s->moves.empty()) {
        s->finished = true;
        s->end = "O has no move";
    }
}

HOSC_API hosc_status hosc_session_new(const hosc_term* t, hosc_model m, const hosc_bounds* b, hosc_session** out) {
    HOSC_NULL_CHECK(t);
    HOSC_NULL_CHECK(out);
    *out = nullptr;
    if (!valid_model(m)) return fail(HOSC_ERR_ARG, "unknown model");
    Bounds bd;
    if (hosc_status st = to_bounds(b, bd)) return st;
    if (hosc_status st = require_cr_free(t)) return st;
    return guarded([&] {
        auto s = std::make_unique<hosc_session>();
        s->model = to_model(m);
        s->ints = bd.ints;
        s->fuel = bd.fuel;
        s->cfg = term_config(t, s->model, bd.ints);
        s->trace = empty_trace_of(s->cfg);
        *out = s.release();
        return HOSC_OK;
    });
}

HOSC_API void hosc_session_free(hosc_session* s) { delete s; }

HOSC_API int hosc_session_active(const hosc_session* s) { return s && s->cfg.active && !s->finished ? 1 : 0; }

HOSC_API int hosc_session_finished(const hosc_session* s) { return !s || s->finished ? 1 : 0; }

HOSC_API hosc_status hosc_session_advance(hosc_session* s, char** p_action) {
    HOSC_NULL_CHECK(s);
    if (p_action) *p_action = nullptr;
    if (s->finished) return fail(HOSC_ERR_ARG, "the game is over: " + s->end);
    if (!s->cfg.active) return fail(HOSC_ERR_ARG, "O is to move");
    return guarded([&] {
        PResult p = p_transition(s->cfg, s->fuel);
        if (p.kind == PKind::Diverged || p.kind == PKind::Stuck) {
            s->finished = true;
            s->end = p.kind == PKind::Diverged ? "P diverges" : "P is stuck";
            if (p_action) *p_action = dup(s->end);
            return HOSC_OK;
        }
        s->trace.acts.push_back(p.action);
        s->cfg = p.next;
        session_refresh(s);
        if (p_action) *p_action = dup(show_action(p.action));
        return HOSC_OK;
    });
}

HOSC_API size_t hosc_session_move_count(const hosc_session* s) { return s ? s->moves.size() : 0; }

HOSC_API hosc_status hosc_session_move(const hosc_session* s, size_t i, char** action, char** note) {
    HOSC_NULL_CHECK(s);
    if (i >= s->moves.size()) return fail(HOSC_ERR_ARG, "move index out of range");
    return guarded([&] {
        const Action& a = s->moves[i].action;
        if (action) *action = dup(show_action(a));
        if (note) {
            std::string ok, no;
            for (Model m : kAllModels) {
                if (auto why = trace_refusal(s->trace, a, m)) {
                    no += (no.empty() ? "" : "; ") + std::string("illegal under ") + model_name(m) + ": " + *why;
                } else {
                    ok += (ok.empty() ? "" : " ") + model_name(m);
                }
            }
            *note = dup("legal under " + (ok.empty() ? std::string("none") : ok) + (no.empty() ? "" : "; " + no));
        }
        return HOSC_OK;
    });
}

static hosc_status session_apply(hosc_session* s, const Action& a) {
    if (s->finished) return fail(HOSC_ERR_ARG, "the game is over: " + s->end);
    if (s->cfg.active) return fail(HOSC_ERR_ARG, "P is to move");
    if (auto why = o_move_refusal(s->cfg, a)) return fail(HOSC_ERR_ILLEGAL_MOVE, *why);
    s->cfg = apply_o_move(s->cfg, a);
    s->trace.acts.push_back(a);
    s->moves.clear();
    return HOSC_OK;
}

HOSC_API hosc_status hosc_session_play_index(hosc_session* s, size_t i) {
    HOSC_NULL_CHECK(s);
    if (i >= s->moves.size()) return fail(HOSC_ERR_ARG, "move index out of range");
    Action a = s->moves[i].action;
    return guarded([&] { return session_apply(s, a); });
}

HOSC_API hosc_status hosc_session_play(hosc_session* s, const char* action) {
    HOSC_NULL_CHECK(s);
    HOSC_NULL_CHECK(action);
    return guarded([&] {
        Action a = parse_action(action);
        if (a.pol != Pol::O) return fail(HOSC_ERR_ILLEGAL_MOVE, "only O-actions can be played");
        return session_apply(s, a);
    });
}

HOSC_API hosc_status hosc_session_state(const hosc_session* s, char** out) {
    HOSC_NULL_CHECK(s);
    HOSC_NULL_CHECK(out);
    std::string st = show_config(s->cfg);
    if (s->finished) st += "\n# game over: " + s->end;
    *out = dup(st);
    return HOSC_OK;
}

HOSC_API hosc_status hosc_session_transcript(const hosc_session* s, char** out) {
    HOSC_NULL_CHECK(s);
    HOSC_NULL_CHECK(out);
    *out = dup(show_trace(s->trace));
    return HOSC_OK;
}

}  // extern "C"
