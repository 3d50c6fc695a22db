#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtsem/ast.hpp"
#include "mtsem/mtir.hpp"

namespace mtsem {

struct RuntimeValue;

struct NoneValue {
    friend bool operator==(const NoneValue&, const NoneValue&) { return true; }
};

struct EnumValue {
    std::string enum_name;
    std::string variant;

    friend bool operator==(const EnumValue& a, const EnumValue& b) {
        return a.enum_name == b.enum_name && a.variant == b.variant;
    }
};

struct ObjectValue {
    std::string class_name;
    std::vector<std::pair<std::string, RuntimeValue>> fields;  // declaration order

    friend bool operator==(const ObjectValue& a, const ObjectValue& b);
};

struct DictValue {
    std::vector<std::pair<std::string, RuntimeValue>> entries;  // insertion order

    friend bool operator==(const DictValue& a, const DictValue& b);
};

/// Typed runtime value used for call arguments and parsed responses.
struct RuntimeValue {
    std::variant<NoneValue, std::string, long long, double, bool,
                 std::vector<RuntimeValue>, DictValue, EnumValue, ObjectValue>
        data;

    static RuntimeValue none() { return {NoneValue{}}; }
    static RuntimeValue str(std::string s) { return {std::move(s)}; }
    static RuntimeValue integer(long long i) { return {i}; }
    static RuntimeValue real(double d) { return {d}; }
    static RuntimeValue boolean(bool b) { return {b}; }
    static RuntimeValue list(std::vector<RuntimeValue> items) { return {std::move(items)}; }
    static RuntimeValue dict(DictValue d) { return {std::move(d)}; }
    static RuntimeValue enum_variant(std::string e, std::string v) {
        return {EnumValue{std::move(e), std::move(v)}};
    }
    static RuntimeValue object(ObjectValue o) { return {std::move(o)}; }

    bool is_none() const { return std::holds_alternative<NoneValue>(data); }

    friend bool operator==(const RuntimeValue& a, const RuntimeValue& b) {
        return a.data == b.data;
    }
};

inline bool operator==(const ObjectValue& a, const ObjectValue& b) {
    return a.class_name == b.class_name && a.fields == b.fields;
}

inline bool operator==(const DictValue& a, const DictValue& b) {
    return a.entries == b.entries;
}

inline const char* value_kind_name(const RuntimeValue& v) {
    struct Visitor {
        const char* operator()(const NoneValue&) { return "None"; }
        const char* operator()(const std::string&) { return "str"; }
        const char* operator()(long long) { return "int"; }
        const char* operator()(double) { return "float"; }
        const char* operator()(bool) { return "bool"; }
        const char* operator()(const std::vector<RuntimeValue>&) { return "list"; }
        const char* operator()(const DictValue&) { return "dict"; }
        const char* operator()(const EnumValue&) { return "enum"; }
        const char* operator()(const ObjectValue&) { return "object"; }
    };
    return std::visit(Visitor{}, v.data);
}

class TypeCheckError : public std::runtime_error {
  public:
    TypeCheckError(std::string path, std::string message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

// ---------------------------------------------------------------------------
// Type catalog: the class/enum shapes needed to check and normalize values.
// ---------------------------------------------------------------------------

struct CatalogAttr {
    std::string name;
    TypeExpr type;
    std::optional<Literal> default_value;
};

struct TypeCatalog {
    std::map<std::string, std::vector<CatalogAttr>> classes;
    std::map<std::string, std::vector<std::string>> enums;

    static TypeCatalog from_mtir(const MtIrStar& ir) {
        TypeCatalog catalog;
        for (const HierarchyEntry& entry : ir.hierarchy) {
            if (entry.kind == HierarchyKind::Class) {
                std::vector<CatalogAttr>& attrs = catalog.classes[entry.key.name];
                for (const HierarchyMember& m : entry.members)
                    attrs.push_back(CatalogAttr{m.name, *m.type, m.default_value});
            } else if (entry.kind == HierarchyKind::Enum) {
                std::vector<std::string>& variants = catalog.enums[entry.key.name];
                for (const HierarchyMember& m : entry.members) variants.push_back(m.name);
            }
        }
        return catalog;
    }
};

inline RuntimeValue literal_to_value(const Literal& lit) {
    switch (lit.kind) {
        case Literal::Kind::Str: return RuntimeValue::str(lit.str);
        case Literal::Kind::Int: return RuntimeValue::integer(lit.int_val);
        case Literal::Kind::Float: return RuntimeValue::real(lit.float_val);
        case Literal::Kind::True: return RuntimeValue::boolean(true);
        case Literal::Kind::False: return RuntimeValue::boolean(false);
        case Literal::Kind::None: return RuntimeValue::none();
        case Literal::Kind::EmptyList: return RuntimeValue::list({});
    }
    return RuntimeValue::none();
}

// ---------------------------------------------------------------------------
// Type checking. Returns the normalized value: int widened to float where the
// declared type says so, object fields reordered to declaration order and
// missing defaulted fields filled in.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string extend_path(const std::string& path, const std::string& segment) {
    return path.empty() ? segment : path + "." + segment;
}

inline RuntimeValue type_check_impl(const RuntimeValue& value,
                                    const TypeExpr& type,
                                    const TypeCatalog& catalog,
                                    const std::string& path) {
    auto mismatch = [&](const std::string& detail) -> TypeCheckError {
        return TypeCheckError(path, "expected " + type.to_string() + ", " + detail);
    };

    if (type.is_generic()) {
        if (type.name == "Optional") {
            if (value.is_none()) return value;
            return type_check_impl(value, type.args[0], catalog, path);
        }
        if (type.name == "list") {
            const auto* items = std::get_if<std::vector<RuntimeValue>>(&value.data);
            if (!items) throw mismatch(std::string("got ") + value_kind_name(value));
            std::vector<RuntimeValue> out;
            out.reserve(items->size());
            for (std::size_t i = 0; i < items->size(); ++i) {
                out.push_back(type_check_impl((*items)[i], type.args[0], catalog,
                                              path + "[" + std::to_string(i) + "]"));
            }
            return RuntimeValue::list(std::move(out));
        }
        if (type.name == "dict") {
            const auto* dict = std::get_if<DictValue>(&value.data);
            if (!dict) throw mismatch(std::string("got ") + value_kind_name(value));
            DictValue out;
            for (const auto& [key, val] : dict->entries) {
                out.entries.emplace_back(
                    key, type_check_impl(val, type.args[1], catalog, path + "['" + key + "']"));
            }
            return RuntimeValue::dict(std::move(out));
        }
        throw mismatch("unknown generic type");
    }

    if (type.name == "str") {
        if (!std::holds_alternative<std::string>(value.data))
            throw mismatch(std::string("got ") + value_kind_name(value));
        return value;
    }
    if (type.name == "int") {
        if (!std::holds_alternative<long long>(value.data))
            throw mismatch(std::string("got ") + value_kind_name(value));
        return value;
    }
    if (type.name == "float") {
        if (const auto* i = std::get_if<long long>(&value.data))
            return RuntimeValue::real(static_cast<double>(*i));  // int -> float widening
        if (!std::holds_alternative<double>(value.data))
            throw mismatch(std::string("got ") + value_kind_name(value));
        return value;
    }
    if (type.name == "bool") {
        if (!std::holds_alternative<bool>(value.data))
            throw mismatch(std::string("got ") + value_kind_name(value));
        return value;
    }

    if (auto cls = catalog.classes.find(type.name); cls != catalog.classes.end()) {
        const auto* obj = std::get_if<ObjectValue>(&value.data);
        if (!obj) throw mismatch(std::string("got ") + value_kind_name(value));
        if (obj->class_name != type.name)
            throw mismatch("got object of class '" + obj->class_name + "'");
        std::string base = path.empty() ? type.name : path;
        for (const auto& [fname, fval] : obj->fields) {
            bool declared = false;
            for (const CatalogAttr& attr : cls->second) declared |= attr.name == fname;
            if (!declared)
                throw TypeCheckError(detail::extend_path(base, fname),
                                     "'" + type.name + "' has no attribute '" + fname + "'");
        }
        ObjectValue out;
        out.class_name = type.name;
        for (const CatalogAttr& attr : cls->second) {
            const RuntimeValue* supplied = nullptr;
            for (const auto& [fname, fval] : obj->fields) {
                if (fname == attr.name) supplied = &fval;
            }
            std::string fpath = detail::extend_path(base, attr.name);
            if (supplied) {
                out.fields.emplace_back(attr.name,
                                        type_check_impl(*supplied, attr.type, catalog, fpath));
            } else if (attr.default_value) {
                out.fields.emplace_back(attr.name,
                                        type_check_impl(literal_to_value(*attr.default_value),
                                                        attr.type, catalog, fpath));
            } else {
                throw TypeCheckError(fpath, "missing attribute '" + attr.name + "'");
            }
        }
        return RuntimeValue::object(std::move(out));
    }

    if (auto en = catalog.enums.find(type.name); en != catalog.enums.end()) {
        const auto* ev = std::get_if<EnumValue>(&value.data);
        if (!ev) throw mismatch(std::string("got ") + value_kind_name(value));
        if (ev->enum_name != type.name)
            throw mismatch("got variant of enum '" + ev->enum_name + "'");
        for (const std::string& variant : en->second) {
            if (variant == ev->variant) return value;
        }
        throw mismatch("'" + ev->variant + "' is not a variant of " + type.name);
    }

    throw mismatch("type is not in the call-site's reachable hierarchy");
}

}  // namespace detail

inline RuntimeValue type_check(const RuntimeValue& value,
                               const TypeExpr& type,
                               const TypeCatalog& catalog,
                               const std::string& path = "") {
    return detail::type_check_impl(value, type, catalog, path);
}

// ---------------------------------------------------------------------------
// Constructor-syntax rendering, as taught to the model by Type_Explanations.
// ---------------------------------------------------------------------------

inline std::string quote_single(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += "'";
    return out;
}

inline std::string render_value(const RuntimeValue& value) {
    struct Visitor {
        std::string operator()(const NoneValue&) { return "None"; }
        std::string operator()(const std::string& s) { return quote_single(s); }
        std::string operator()(long long i) { return std::to_string(i); }
        std::string operator()(double d) { return format_double(d); }
        std::string operator()(bool b) { return b ? "true" : "false"; }
        std::string operator()(const std::vector<RuntimeValue>& items) {
            std::string out = "[";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i > 0) out += ", ";
                out += render_value(items[i]);
            }
            return out + "]";
        }
        std::string operator()(const DictValue& dict) {
            std::string out = "{";
            for (std::size_t i = 0; i < dict.entries.size(); ++i) {
                if (i > 0) out += ", ";
                out += quote_single(dict.entries[i].first) + ": " +
                       render_value(dict.entries[i].second);
            }
            return out + "}";
        }
        std::string operator()(const EnumValue& e) { return e.enum_name + "." + e.variant; }
        std::string operator()(const ObjectValue& o) {
            std::string out = o.class_name + "(";
            for (std::size_t i = 0; i < o.fields.size(); ++i) {
                if (i > 0) out += ", ";
                out += o.fields[i].first + " = " + render_value(o.fields[i].second);
            }
            return out + ")";
        }
    };
    return std::visit(Visitor{}, value.data);
}

// ---------------------------------------------------------------------------
// JSON codec for the CLI argument file format and for --output json.
// Objects are tagged {"$type": "Cls", ...fields}, enum variants
// {"$enum": "E", "variant": "V"}, None is null.
// ---------------------------------------------------------------------------

inline RuntimeValue value_from_json(const nlohmann::ordered_json& j) {
    using json = nlohmann::ordered_json;
    switch (j.type()) {
        case json::value_t::null: return RuntimeValue::none();
        case json::value_t::string: return RuntimeValue::str(j.get<std::string>());
        case json::value_t::boolean: return RuntimeValue::boolean(j.get<bool>());
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
            return RuntimeValue::integer(j.get<long long>());
        case json::value_t::number_float: return RuntimeValue::real(j.get<double>());
        case json::value_t::array: {
            std::vector<RuntimeValue> items;
            for (const auto& item : j) items.push_back(value_from_json(item));
            return RuntimeValue::list(std::move(items));
        }
        case json::value_t::object: {
            if (j.contains("$type")) {
                ObjectValue obj;
                obj.class_name = j.at("$type").get<std::string>();
                for (const auto& [key, val] : j.items()) {
                    if (key == "$type") continue;
                    obj.fields.emplace_back(key, value_from_json(val));
                }
                return RuntimeValue::object(std::move(obj));
            }
            if (j.contains("$enum")) {
                return RuntimeValue::enum_variant(j.at("$enum").get<std::string>(),
                                                  j.at("variant").get<std::string>());
            }
            DictValue dict;
            for (const auto& [key, val] : j.items()) dict.entries.emplace_back(key, value_from_json(val));
            return RuntimeValue::dict(std::move(dict));
        }
        default:
            throw TypeCheckError("", "unsupported JSON value");
    }
}

inline nlohmann::ordered_json value_to_json(const RuntimeValue& value) {
    using json = nlohmann::ordered_json;
    struct Visitor {
        json operator()(const NoneValue&) { return nullptr; }
        json operator()(const std::string& s) { return s; }
        json operator()(long long i) { return i; }
        json operator()(double d) { return d; }
        json operator()(bool b) { return b; }
        json operator()(const std::vector<RuntimeValue>& items) {
            json arr = json::array();
            for (const RuntimeValue& item : items) arr.push_back(value_to_json(item));
            return arr;
        }
        json operator()(const DictValue& dict) {
            json obj = json::object();
            for (const auto& [key, val] : dict.entries) obj[key] = value_to_json(val);
            return obj;
        }
        json operator()(const EnumValue& e) {
            json obj = json::object();
            obj["$enum"] = e.enum_name;
            obj["variant"] = e.variant;
            return obj;
        }
        json operator()(const ObjectValue& o) {
            json obj = json::object();
            obj["$type"] = o.class_name;
            for (const auto& [key, val] : o.fields) obj[key] = value_to_json(val);
            return obj;
        }
    };
    return std::visit(Visitor{}, value.data);
}

}  // namespace mtsem
