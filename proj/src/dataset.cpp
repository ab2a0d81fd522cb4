#include "groupform/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "groupform/dsl.hpp"

namespace groupform {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class Collector {
public:
    std::vector<ValidationIssue> issues;

    void add(std::string where, std::string message) {
        issues.push_back({std::move(where), std::move(message)});
    }

    bool clean() const { return issues.empty(); }
};

std::optional<AttributeValue> convert_value(const json& v, const std::string& where,
                                            Collector& out) {
    if (v.is_number()) {
        try {
            if (v.is_number_integer()) {
                auto i = v.get<std::int64_t>();
                if (i <= 9'000'000'000'000LL && i >= -9'000'000'000'000LL) {
                    return AttributeValue::number(Decimal::from_int(i));
                }
            }
            return AttributeValue::number(Decimal::from_double(v.get<double>()));
        } catch (const Error& e) {
            out.add(where, e.what());
            return std::nullopt;
        }
    }
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (Date::looks_like_date(s)) {
            auto date = Date::parse(s);
            if (!date) {
                out.add(where, "'" + s + "' looks like a date but is not a valid calendar date");
                return std::nullopt;
            }
            return AttributeValue::date(*date);
        }
        return AttributeValue::text(std::move(s));
    }
    out.add(where, "attribute values must be numbers or strings");
    return std::nullopt;
}

std::optional<AttributeRecord> convert_record(const json& v, const std::string& where,
                                              Collector& out) {
    if (!v.is_object()) {
        out.add(where, "expected an object with \"id\" and \"attributes\"");
        return std::nullopt;
    }
    AttributeRecord record;
    if (!v.contains("id") || !v["id"].is_string() || v["id"].get<std::string>().empty()) {
        out.add(where, "missing or empty \"id\"");
        return std::nullopt;
    }
    record.entity_id = v["id"].get<std::string>();
    if (v.contains("attributes")) {
        if (!v["attributes"].is_object()) {
            out.add(where + ".attributes", "expected an object");
            return std::nullopt;
        }
        for (const auto& [name, raw] : v["attributes"].items()) {
            if (name.empty()) {
                out.add(where + ".attributes", "empty attribute name");
                continue;
            }
            auto value = convert_value(raw, where + ".attributes." + name, out);
            if (value) record.attributes.emplace(name, std::move(*value));
        }
    }
    return record;
}

void report_dsl_diagnostics(const std::vector<dsl::ParseDiagnostic>& diagnostics,
                            const std::string& where, Collector& out) {
    for (const auto& d : diagnostics) {
        if (d.severity == dsl::Severity::error) {
            out.add(where, d.message + " (column " + std::to_string(d.span.column) + ")");
        }
    }
}

// Kind-consistency pass: a constraint literal must agree with the attribute
// kind observed on every record that defines the attribute, and aggregated
// attributes must be numeric (count excepted).
class KindChecker {
public:
    explicit KindChecker(const Population& users) : users_(users) {}

    void check_predicate_against(const AttributeRecord& record, const std::string& attribute,
                                 Kind literal_kind, const std::string& constraint,
                                 const std::string& where, Collector& out) const {
        auto it = record.attributes.find(attribute);
        if (it == record.attributes.end()) return;
        if (it->second.kind() != literal_kind) {
            out.add(where, "constraint '" + constraint + "' expects " +
                               std::string(kind_name(literal_kind)) + " but '" +
                               record.entity_id + "' has " + attribute + " of kind " +
                               std::string(kind_name(it->second.kind())));
        }
    }

    void check_value_predicate(const ValuePredicate& pred, const std::string& constraint,
                               const std::string& where, Collector& out) const {
        for (const auto& user : users_) {
            auto it = user.attributes.find(pred.attribute);
            if (it != user.attributes.end() && it->second.kind() != pred.value.kind()) {
                out.add(where, "constraint '" + constraint + "' expects " +
                                   std::string(kind_name(pred.value.kind())) + " but '" +
                                   user.entity_id + "' has " + pred.attribute + " of kind " +
                                   std::string(kind_name(it->second.kind())));
                return;  // one witness is enough
            }
        }
    }

    void check_aggregation(const AggregationPredicate& pred, const std::string& constraint,
                           const std::string& where, Collector& out) const {
        if (pred.aggregator == Aggregator::count) return;
        for (const auto& user : users_) {
            auto it = user.attributes.find(pred.attribute);
            if (it != user.attributes.end() && it->second.kind() != Kind::number) {
                out.add(where, "constraint '" + constraint + "' aggregates " + pred.attribute +
                                   " but '" + user.entity_id + "' defines it as " +
                                   std::string(kind_name(it->second.kind())));
                return;
            }
        }
    }

    void check_group_constraint(const GroupConstraint& gc, const std::string& where,
                                Collector& out) const {
        std::string constraint = dsl::render(gc);
        if (const auto* v = std::get_if<ValuePredicate>(&gc)) {
            check_value_predicate(*v, constraint, where, out);
        } else if (const auto* a = std::get_if<AggregationPredicate>(&gc)) {
            check_aggregation(*a, constraint, where, out);
        } else {
            for (const auto& conjunct : std::get<CompositeConstraint>(gc).conjuncts) {
                if (const auto* cv = std::get_if<ValuePredicate>(&conjunct)) {
                    check_value_predicate(*cv, constraint, where, out);
                } else {
                    check_aggregation(std::get<AggregationPredicate>(conjunct), constraint,
                                      where, out);
                }
            }
        }
    }

private:
    const Population& users_;
};

}  // namespace

LoadResult load_dataset_text(const std::string& text) {
    LoadResult result;
    Collector out;

    // Duplicate keys inside any JSON object would silently collapse, so they
    // are detected during the parse.
    std::vector<std::set<std::string>> key_stack;
    json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            key_stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            key_stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            auto key = parsed.get<std::string>();
            if (!key_stack.empty() && !key_stack.back().insert(key).second) {
                out.add("$", "duplicate key '" + key + "'");
            }
        }
        return true;
    };

    json doc = json::parse(text, cb, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        out.add("$", "malformed JSON");
        result.issues = std::move(out.issues);
        return result;
    }
    if (!doc.is_object()) {
        out.add("$", "dataset must be a JSON object");
        result.issues = std::move(out.issues);
        return result;
    }

    Dataset dataset;

    // item
    if (!doc.contains("item")) {
        out.add("item", "missing");
    } else if (auto item = convert_record(doc["item"], "item", out)) {
        dataset.instance.item = std::move(*item);
    }

    // users
    if (!doc.contains("users") || !doc["users"].is_array()) {
        out.add("users", "missing or not an array");
    } else if (doc["users"].empty()) {
        out.add("users", "population must be non-empty");
    } else {
        std::size_t i = 0;
        for (const auto& u : doc["users"]) {
            std::string where = "users[" + std::to_string(i) + "]";
            if (auto record = convert_record(u, where, out)) {
                try {
                    dataset.instance.users.add(std::move(*record));
                } catch (const ContractError& e) {
                    out.add(where, e.what());
                }
            }
            ++i;
        }
    }

    // profiles
    if (doc.contains("profiles")) {
        if (!doc["profiles"].is_array()) {
            out.add("profiles", "expected an array");
        } else {
            std::size_t i = 0;
            for (const auto& p : doc["profiles"]) {
                std::string where = "profiles[" + std::to_string(i) + "]";
                ++i;
                if (!p.is_object() || !p.contains("owner") || !p["owner"].is_string()) {
                    out.add(where, "expected an object with an \"owner\"");
                    continue;
                }
                ConstraintProfile profile;
                profile.owner = p["owner"].get<std::string>();
                if (dataset.instance.users.find(profile.owner) == nullptr) {
                    out.add(where, "owner '" + profile.owner + "' is not a known user");
                }
                if (dataset.instance.profiles.count(profile.owner) != 0) {
                    out.add(where, "duplicate profile for owner '" + profile.owner + "'");
                    continue;
                }
                if (p.contains("item_constraints")) {
                    std::size_t j = 0;
                    for (const auto& c : p["item_constraints"]) {
                        std::string cw = where + ".item_constraints[" + std::to_string(j) + "]";
                        ++j;
                        if (!c.is_string()) {
                            out.add(cw, "constraints are DSL strings");
                            continue;
                        }
                        auto parsed = dsl::parse_item_predicate(c.get<std::string>());
                        if (parsed.ok()) {
                            profile.item_constraints.push_back(std::move(*parsed.value));
                        } else {
                            report_dsl_diagnostics(parsed.diagnostics, cw, out);
                        }
                    }
                }
                if (p.contains("group_constraints")) {
                    std::size_t j = 0;
                    for (const auto& c : p["group_constraints"]) {
                        std::string cw = where + ".group_constraints[" + std::to_string(j) + "]";
                        ++j;
                        if (!c.is_string()) {
                            out.add(cw, "constraints are DSL strings");
                            continue;
                        }
                        auto parsed = dsl::parse_group_constraint(c.get<std::string>());
                        if (parsed.ok()) {
                            profile.group_constraints.push_back(std::move(*parsed.value));
                        } else {
                            report_dsl_diagnostics(parsed.diagnostics, cw, out);
                        }
                    }
                }
                dataset.instance.profiles.emplace(profile.owner, std::move(profile));
            }
        }
    }

    // company
    dataset.instance.company.owner = std::string(kCompanyOwner);
    if (doc.contains("company")) {
        const auto& c = doc["company"];
        if (!c.is_object()) {
            out.add("company", "expected an object");
        } else {
            if (c.contains("item_constraints") && !c["item_constraints"].empty()) {
                out.add("company", "the company profile cannot carry item constraints");
            }
            if (c.contains("group_constraints")) {
                std::size_t j = 0;
                for (const auto& gc : c["group_constraints"]) {
                    std::string cw = "company.group_constraints[" + std::to_string(j) + "]";
                    ++j;
                    if (!gc.is_string()) {
                        out.add(cw, "constraints are DSL strings");
                        continue;
                    }
                    auto parsed = dsl::parse_group_constraint(gc.get<std::string>());
                    if (parsed.ok()) {
                        dataset.instance.company.group_constraints.push_back(
                            std::move(*parsed.value));
                    } else {
                        report_dsl_diagnostics(parsed.diagnostics, cw, out);
                    }
                }
            }
        }
    }

    // scores
    if (doc.contains("scores")) {
        const auto& s = doc["scores"];
        if (!s.is_object()) {
            out.add("scores", "expected an object");
        } else {
            if (s.contains("default")) {
                if (!s["default"].is_number()) {
                    out.add("scores.default", "expected a number");
                } else {
                    dataset.instance.scores.set_default(
                        Decimal::from_double(s["default"].get<double>()));
                }
            }
            if (s.contains("entries")) {
                std::size_t j = 0;
                for (const auto& e : s["entries"]) {
                    std::string ew = "scores.entries[" + std::to_string(j) + "]";
                    ++j;
                    if (!e.is_array() || e.size() != 3 || !e[0].is_string() ||
                        !e[1].is_string() || !e[2].is_number()) {
                        out.add(ew, "expected [user, item, score]");
                        continue;
                    }
                    auto user = e[0].get<std::string>();
                    auto item = e[1].get<std::string>();
                    if (dataset.instance.users.find(user) == nullptr) {
                        out.add(ew, "unknown user '" + user + "'");
                        continue;
                    }
                    if (item != dataset.instance.item.entity_id) {
                        out.add(ew, "unknown item '" + item + "'");
                        continue;
                    }
                    if (dataset.instance.scores.has(user, item)) {
                        out.add(ew, "duplicate score for (" + user + ", " + item + ")");
                        continue;
                    }
                    try {
                        dataset.instance.scores.set(user, item,
                                                    Decimal::from_double(e[2].get<double>()));
                    } catch (const Error& err) {
                        out.add(ew, err.what());
                    }
                }
            }
        }
    }

    // score totality when no default is configured
    if (!dataset.instance.scores.default_score()) {
        for (const auto& user : dataset.instance.users) {
            if (!dataset.instance.scores.has(user.entity_id, dataset.instance.item.entity_id)) {
                out.add("scores", "user '" + user.entity_id +
                                      "' has no score for the item and no default is set");
            }
        }
    }

    // kind-consistency pass
    KindChecker checker(dataset.instance.users);
    for (const auto& [owner, profile] : dataset.instance.profiles) {
        std::size_t j = 0;
        for (const auto& pred : profile.item_constraints) {
            checker.check_predicate_against(dataset.instance.item, pred.attribute,
                                            pred.value.kind(), dsl::render(pred),
                                            "profiles(" + owner + ").item_constraints[" +
                                                std::to_string(j) + "]",
                                            out);
            ++j;
        }
        j = 0;
        for (const auto& gc : profile.group_constraints) {
            checker.check_group_constraint(gc,
                                           "profiles(" + owner + ").group_constraints[" +
                                               std::to_string(j) + "]",
                                           out);
            ++j;
        }
    }
    {
        std::size_t j = 0;
        for (const auto& gc : dataset.instance.company.group_constraints) {
            checker.check_group_constraint(
                gc, "company.group_constraints[" + std::to_string(j) + "]", out);
            ++j;
        }
    }

    result.issues = std::move(out.issues);
    if (result.issues.empty()) result.dataset = std::move(dataset);
    return result;
}

LoadResult load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        LoadResult result;
        result.issues.push_back({path, "cannot open file"});
        return result;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_dataset_text(buf.str());
}

namespace {

ordered_json value_to_json(const AttributeValue& value) {
    switch (value.kind()) {
        case Kind::number: return value.as_number().to_double();
        case Kind::date: return value.as_date().str();
        case Kind::text: return value.as_text();
    }
    return nullptr;
}

ordered_json record_to_json(const AttributeRecord& record) {
    ordered_json out;
    out["id"] = record.entity_id;
    ordered_json attrs = ordered_json::object();
    for (const auto& [name, value] : record.attributes) attrs[name] = value_to_json(value);
    out["attributes"] = std::move(attrs);
    return out;
}

}  // namespace

std::string dataset_to_json(const Dataset& dataset) {
    ordered_json doc;
    doc["item"] = record_to_json(dataset.instance.item);
    doc["users"] = ordered_json::array();
    for (const auto& user : dataset.instance.users) {
        doc["users"].push_back(record_to_json(user));
    }
    doc["profiles"] = ordered_json::array();
    for (const auto& [owner, profile] : dataset.instance.profiles) {
        if (profile.empty()) continue;
        ordered_json p;
        p["owner"] = owner;
        p["item_constraints"] = ordered_json::array();
        for (const auto& pred : profile.item_constraints) {
            p["item_constraints"].push_back(dsl::render(pred));
        }
        p["group_constraints"] = ordered_json::array();
        for (const auto& gc : profile.group_constraints) {
            p["group_constraints"].push_back(dsl::render(gc));
        }
        doc["profiles"].push_back(std::move(p));
    }
    ordered_json company;
    company["group_constraints"] = ordered_json::array();
    for (const auto& gc : dataset.instance.company.group_constraints) {
        company["group_constraints"].push_back(dsl::render(gc));
    }
    doc["company"] = std::move(company);
    ordered_json scores;
    if (dataset.instance.scores.default_score()) {
        scores["default"] = dataset.instance.scores.default_score()->to_double();
    }
    scores["entries"] = ordered_json::array();
    for (const auto& [key, score] : dataset.instance.scores.entries()) {
        scores["entries"].push_back(
            ordered_json::array({key.first, key.second, score.to_double()}));
    }
    doc["scores"] = std::move(scores);
    return doc.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream outfile(path, std::ios::binary);
    if (!outfile) throw Error("cannot write to '" + path + "'");
    outfile << dataset_to_json(dataset);
}

}  // namespace groupform
