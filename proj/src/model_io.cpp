#include "vjm/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vjm/errors.hpp"

namespace vjm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& reason) {
    throw ModelError("model document: " + context + ": " + reason);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
    if (!j.is_object()) fail(context, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(context, "unknown field '" + item.key() + "'");
    }
}

const json& require(const json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) fail(context, std::string("missing field '") + key + "'");
    return j.at(key);
}

double require_number(const json& j, const char* key, const std::string& context) {
    const json& v = require(j, key, context);
    if (!v.is_number()) fail(context, std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& context) {
    const json& v = require(j, key, context);
    if (!v.is_string()) fail(context, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Axis parse_axis(const json& j, const char* key, const std::string& context) {
    const std::string s = require_string(j, key, context);
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    fail(context, std::string("field '") + key + "' must be one of \"x\", \"y\", \"z\"");
}

Eigen::Vector3d parse_vec3(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 3) fail(context, "expected an array of 3 numbers");
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) fail(context, "entries must be numbers");
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

Eigen::MatrixXd parse_matrix(const json& j, int rows, int cols, const std::string& context) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
        std::ostringstream os;
        os << "expected " << rows << " rows";
        fail(context, os.str());
    }
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            std::ostringstream os;
            os << "row " << r << " must have " << cols << " entries";
            fail(context, os.str());
        }
        for (int c = 0; c < cols; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number()) {
                fail(context, "matrix entries must be numbers");
            }
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

Transform parse_transform(const json& j, const std::string& context) {
    check_keys(j, {"translation", "rotation"}, context);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    if (j.contains("translation")) p = parse_vec3(j.at("translation"), context + ".translation");
    if (j.contains("rotation")) {
        const Eigen::Matrix3d raw = parse_matrix(j.at("rotation"), 3, 3, context + ".rotation");
        const double drift =
            (raw.transpose() * raw - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
        if (drift > 1e-6 || raw.determinant() < 0.0) {
            fail(context + ".rotation", "not a rotation matrix (within 1e-6)");
        }
        r = nearest_rotation(raw);  // load-time re-normalization
    }
    return Transform(r, p);
}

Section parse_section(const json& j, const std::string& context) {
    const std::string type = require_string(j, "type", context);
    if (type == "rectangle") {
        check_keys(j, {"type", "width", "height"}, context);
        return RectangleSection{require_number(j, "width", context),
                                require_number(j, "height", context)};
    }
    if (type == "circle") {
        check_keys(j, {"type", "diameter"}, context);
        return CircleSection{require_number(j, "diameter", context)};
    }
    fail(context, "section type must be \"rectangle\" or \"circle\"");
}

BeamSpec parse_beam(const json& j, const std::string& context) {
    check_keys(j, {"length", "elastic_modulus", "shear_modulus", "section"}, context);
    BeamSpec spec;
    spec.length = require_number(j, "length", context);
    spec.elastic_modulus = require_number(j, "elastic_modulus", context);
    spec.shear_modulus = require_number(j, "shear_modulus", context);
    spec.section = parse_section(require(j, "section", context), context + ".section");
    return spec;
}

Matrix6d parse_spring_stiffness(const json& j, const std::string& context,
                                const std::string& base_dir) {
    int sources = 0;
    for (const char* key : {"stiffness", "beam", "beam_chain", "external"}) {
        if (j.contains(key)) ++sources;
    }
    if (sources != 1) {
        fail(context,
             "exactly one of 'stiffness', 'beam', 'beam_chain', 'external' must be given");
    }
    if (j.contains("stiffness")) {
        return parse_matrix(j.at("stiffness"), 6, 6, context + ".stiffness");
    }
    if (j.contains("beam")) {
        return beam_compliance(parse_beam(j.at("beam"), context + ".beam")).stiffness();
    }
    if (j.contains("beam_chain")) {
        const json& arr = j.at("beam_chain");
        if (!arr.is_array() || arr.empty()) {
            fail(context + ".beam_chain", "expected a non-empty array");
        }
        std::vector<std::pair<BeamSpec, Transform>> beams;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ctx = context + ".beam_chain[" + std::to_string(i) + "]";
            check_keys(arr[i], {"beam", "offset"}, ctx);
            Transform offset;
            if (arr[i].contains("offset")) offset = parse_transform(arr[i].at("offset"), ctx);
            beams.emplace_back(parse_beam(require(arr[i], "beam", ctx), ctx + ".beam"), offset);
        }
        return chain_link_compliances(beams).stiffness();
    }
    const std::string rel = require_string(j, "external", context);
    const std::filesystem::path p = std::filesystem::path(base_dir) / rel;
    return read_external_compliance_file(p.string()).stiffness();
}

ChainElement parse_element(const json& j, const std::string& context,
                           const std::string& base_dir) {
    const std::string type = require_string(j, "type", context);
    if (type == "rigid") {
        check_keys(j, {"type", "transform"}, context);
        Transform t;
        if (j.contains("transform")) t = parse_transform(j.at("transform"), context);
        return RigidLink{t};
    }
    if (type == "actuated") {
        check_keys(j, {"type", "axis", "kind", "stiffness"}, context);
        const std::string kind = require_string(j, "kind", context);
        if (kind != "translation" && kind != "rotation") {
            fail(context, "kind must be \"translation\" or \"rotation\"");
        }
        return ActuatedJoint{{parse_axis(j, "axis", context),
                              kind == "translation" ? MotionKind::Translation
                                                    : MotionKind::Rotation},
                             require_number(j, "stiffness", context)};
    }
    if (type == "spring") {
        check_keys(j, {"type", "stiffness", "beam", "beam_chain", "external"}, context);
        return Spring6{parse_spring_stiffness(j, context, base_dir)};
    }
    if (type == "passive_u") {
        check_keys(j, {"type", "axis_first", "axis_second"}, context);
        return PassiveU{rotation_about(parse_axis(j, "axis_first", context)),
                        rotation_about(parse_axis(j, "axis_second", context))};
    }
    if (type == "passive_r") {
        check_keys(j, {"type", "axis"}, context);
        return PassiveR{rotation_about(parse_axis(j, "axis", context))};
    }
    if (type == "parallelogram") {
        check_keys(j, {"type", "axis", "length"}, context);
        return ParallelogramLink{rotation_about(parse_axis(j, "axis", context)),
                                 require_number(j, "length", context)};
    }
    fail(context, "unknown element type '" + type + "'");
}

OrthoglideParams parse_params(const json& j, const std::string& context) {
    check_keys(j,
               {"leg_length", "foot_beam", "bar_beam", "parallelogram_width",
                "actuator_stiffness", "rail_offsets"},
               context);
    OrthoglideParams p;
    p.leg_length = require_number(j, "leg_length", context);
    p.foot_beam = parse_beam(require(j, "foot_beam", context), context + ".foot_beam");
    p.bar_beam = parse_beam(require(j, "bar_beam", context), context + ".bar_beam");
    p.parallelogram_width = require_number(j, "parallelogram_width", context);
    p.actuator_stiffness = require_number(j, "actuator_stiffness", context);
    if (j.contains("rail_offsets")) {
        const Eigen::Vector3d o = parse_vec3(j.at("rail_offsets"), context + ".rail_offsets");
        p.rail_offsets = {o(0), o(1), o(2)};
    }
    p.validate();
    return p;
}

ChainCoordinates parse_coordinates(const json& j, const ChainDescription& chain,
                                   const std::string& context) {
    check_keys(j, {"q_act", "q_passive", "theta"}, context);
    ChainCoordinates c = chain.zero_coordinates();
    if (j.contains("q_act")) {
        if (!j.at("q_act").is_number()) fail(context, "q_act must be a number");
        c.q_act = j.at("q_act").get<double>();
    }
    const auto fill = [&](const char* key, Eigen::VectorXd& target) {
        if (!j.contains(key)) return;
        const json& arr = j.at(key);
        if (!arr.is_array() || static_cast<int>(arr.size()) != target.size()) {
            std::ostringstream os;
            os << key << " must be an array of " << target.size() << " numbers";
            fail(context, os.str());
        }
        for (int i = 0; i < target.size(); ++i) {
            target(i) = arr[static_cast<std::size_t>(i)].get<double>();
        }
    };
    fill("q_passive", c.q_passive);
    fill("theta", c.theta);
    return c;
}

ModelDocument parse_document(const json& root, const std::string& base_dir) {
    check_keys(root, {"schema_version", "manipulator"}, "root");
    const std::string version = require_string(root, "schema_version", "root");
    if (version != "1") fail("root", "unsupported schema_version '" + version + "'");

    const json& manip = require(root, "manipulator", "root");
    ModelDocument doc;
    doc.schema_version = version;

    if (manip.contains("builder")) {
        check_keys(manip, {"builder", "params"}, "manipulator");
        const std::string builder = require_string(manip, "builder", "manipulator");
        BuilderModel bm;
        if (builder == "orthoglide-3puu") {
            bm.variant = OrthoglideVariant::ThreePuu;
        } else if (builder == "orthoglide-3prpar") {
            bm.variant = OrthoglideVariant::ThreePrpar;
        } else {
            fail("manipulator", "unknown builder '" + builder + "'");
        }
        bm.params = parse_params(require(manip, "params", "manipulator"), "manipulator.params");
        doc.manipulator = std::move(bm);
        return doc;
    }

    check_keys(manip, {"chains"}, "manipulator");
    const json& chains = require(manip, "chains", "manipulator");
    if (!chains.is_array() || chains.empty()) {
        fail("manipulator.chains", "expected a non-empty array");
    }
    ExplicitModel em;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const std::string ctx = "manipulator.chains[" + std::to_string(i) + "]";
        const json& jc = chains[i];
        check_keys(jc, {"name", "elements", "coordinates"}, ctx);
        const std::string name =
            jc.contains("name") ? require_string(jc, "name", ctx) : "chain-" + std::to_string(i);
        const json& elems = require(jc, "elements", ctx);
        if (!elems.is_array() || elems.empty()) fail(ctx + ".elements", "expected a non-empty array");
        std::vector<ChainElement> elements;
        for (std::size_t k = 0; k < elems.size(); ++k) {
            elements.push_back(parse_element(
                elems[k], ctx + ".elements[" + std::to_string(k) + "]", base_dir));
        }
        ChainDescription chain(name, std::move(elements));
        ChainCoordinates coords = jc.contains("coordinates")
                                      ? parse_coordinates(jc.at("coordinates"), chain,
                                                          ctx + ".coordinates")
                                      : chain.zero_coordinates();
        em.chains.push_back(std::move(chain));
        em.coords.push_back(std::move(coords));
    }
    doc.manipulator = std::move(em);
    return doc;
}

json parse_json_or_fail(const std::string& text, const std::string& what) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) throw ModelError(what + ": invalid JSON");
    return root;
}

}  // namespace

ModelDocument load_model_text(const std::string& text, const std::string& base_dir) {
    return parse_document(parse_json_or_fail(text, "model document"), base_dir);
}

ModelDocument load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return load_model_text(buffer.str(), dir.empty() ? "." : dir);
}

LinkCompliance read_external_compliance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open compliance file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const json root = parse_json_or_fail(buffer.str(), "compliance file '" + path + "'");

    const std::string context = "compliance file '" + path + "'";
    check_keys(root, {"matrix", "units"}, context);
    const json& units = require(root, "units", context);
    check_keys(units, {"length", "force"}, context + ".units");
    if (require_string(units, "length", context) != "mm" ||
        require_string(units, "force", context) != "N") {
        fail(context, "units must be exactly {\"length\":\"mm\",\"force\":\"N\"}");
    }
    const Eigen::MatrixXd m = parse_matrix(require(root, "matrix", context), 6, 6, context);
    return load_external_compliance(m);
}

}  // namespace vjm
