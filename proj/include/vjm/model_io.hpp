#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vjm/beam.hpp"
#include "vjm/chain.hpp"
#include "vjm/orthoglide.hpp"

namespace vjm {

// JSON model documents, schema v1 (see docs/model_schema.md). Documents are
// validated strictly before any numerics: unknown fields, wrong shapes and
// invalid matrices are rejected with ModelError. Rotation blocks are
// re-normalized (nearest-rotation projection) at load time only.

/// Manipulator given as a named builder plus parameters.
struct BuilderModel {
    OrthoglideVariant variant = OrthoglideVariant::ThreePrpar;
    OrthoglideParams params;
};

/// Manipulator given as explicit chains, each with stored coordinates.
struct ExplicitModel {
    std::vector<ChainDescription> chains;
    std::vector<ChainCoordinates> coords;
};

struct ModelDocument {
    std::string schema_version;
    std::variant<BuilderModel, ExplicitModel> manipulator;

    bool is_builder() const { return std::holds_alternative<BuilderModel>(manipulator); }
    const BuilderModel& builder() const { return std::get<BuilderModel>(manipulator); }
    const ExplicitModel& explicit_model() const { return std::get<ExplicitModel>(manipulator); }
};

/// Parse a model document from a file. Relative external-compliance
/// references resolve against the file's directory.
ModelDocument load_model_file(const std::string& path);

/// Parse a model document from JSON text.
ModelDocument load_model_text(const std::string& text, const std::string& base_dir = ".");

/// Read an external 6x6 compliance file: a row-major matrix plus a units
/// object that must be exactly {"length":"mm","force":"N"}; no conversion is
/// performed. The matrix goes through the load_external_compliance gate.
LinkCompliance read_external_compliance_file(const std::string& path);

}  // namespace vjm
