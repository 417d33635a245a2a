#pragma once

// Data files compiled into the library (see data/).
namespace natlog::bundled {

extern const char* const kRules;
extern const char* const kCorrections;
extern const char* const kSignature;
extern const char* const kKnowledgeBase;

}  // namespace natlog::bundled
