// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/injector.hpp"
#include "cweseed/outcomes.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace cweseed::html {

enum class RenderMode { Challenge, Explained };

std::string_view to_string(RenderMode mode);

struct HtmlArtifact {
    std::string candidate_id;
    RenderMode mode = RenderMode::Challenge;
    std::string document; // standalone: inline styles, no external fetches
};

std::string escape(std::string_view text);

/// Line-numbered, escaped rendering of the injected code with every changed
/// line marked. Challenge mode shows the exercise only and scrubs the
/// candidate's CWE id/name/description wherever they might surface;
/// Explained mode embeds the CWE metadata and the learning artifact.
/// Deterministic output. Errors: MissingArtifact (Explained mode without a
/// learning artifact).
HtmlArtifact render_candidate_html(
    const injector::InjectionCandidate& candidate,
    const std::optional<outcomes::LearningArtifact>& artifact, RenderMode mode);

} // namespace cweseed::html
