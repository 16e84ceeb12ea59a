#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "usfm/opl/sentence.hpp"
#include "usfm/opm/model.hpp"

namespace usfm::opl {

enum class Severity { Warning, Error };

struct Diagnostic {
    int line = 0;
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct ParseResult {
    opm::Model model;
    std::vector<Sentence> sentences;  // successfully classified sentences, document order
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const;
    std::vector<const Diagnostic*> errors() const;
};

// Parses a document of '.'-terminated sentences ('#' starts a to-end-of-line
// comment). A malformed sentence yields one error diagnostic and is skipped;
// parsing always continues, so the model holds everything that was readable.
//
// Name resolution: declaration-sentence subjects (essence, state set,
// consists-of, exhibits, zooms-into) bind to the most recently declared thing
// of that name in any scope; procedural sentences resolve names at top level
// only. Unknown names in link positions are auto-declared as implicit
// informational systemic things, each reported once as an IMPLICIT_DECL
// warning.
ParseResult parse_document(std::string_view text, std::string model_name = "model");

ParseResult parse_file(const std::string& path);  // model named after the file stem

}  // namespace usfm::opl
