use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

const DEFAULT_LEXICON: &str = include_str!("../../data/default.lexicon");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("reading lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Quantifier a cue word asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuantifierCue {
    ForAll,
    Exists,
    /// "no", "none": satisfied by either an existential or a universal.
    NegatedExists,
}

impl FromStr for QuantifierCue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "forall" => Ok(QuantifierCue::ForAll),
            "exists" => Ok(QuantifierCue::Exists),
            "negated_exists" | "negated-exists" => Ok(QuantifierCue::NegatedExists),
            other => Err(format!("unknown quantifier kind '{other}'")),
        }
    }
}

/// Connective a cue word asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConnectiveCue {
    And,
    Or,
    Implies,
    Not,
}

impl FromStr for ConnectiveCue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "and" => Ok(ConnectiveCue::And),
            "or" => Ok(ConnectiveCue::Or),
            "implies" => Ok(ConnectiveCue::Implies),
            "not" => Ok(ConnectiveCue::Not),
            other => Err(format!("unknown connective kind '{other}'")),
        }
    }
}

impl fmt::Display for ConnectiveCue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectiveCue::And => "and",
            ConnectiveCue::Or => "or",
            ConnectiveCue::Implies => "implies",
            ConnectiveCue::Not => "not",
        })
    }
}

/// A cue: one or more lowercase words matched as a contiguous run.
pub type Phrase = Vec<String>;

/// Word lists linking formulas to sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub predicates: BTreeMap<String, Vec<String>>,
    pub anaphora: Vec<Phrase>,
    pub negation: Vec<Phrase>,
    pub special: Vec<Phrase>,
    pub quantifier_cues: Vec<(Phrase, QuantifierCue)>,
    pub connective_cues: Vec<(Phrase, ConnectiveCue)>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse_over(Lexicon::empty(), DEFAULT_LEXICON).expect("built-in lexicon parses")
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Predicates,
    Anaphora,
    Negation,
    Special,
    QuantifierCues,
    ConnectiveCues,
}

fn phrase(s: &str) -> Phrase {
    s.split_whitespace().map(str::to_string).collect()
}

impl Lexicon {
    /// A lexicon with no entries at all.
    pub fn empty() -> Self {
        Lexicon {
            predicates: BTreeMap::new(),
            anaphora: Vec::new(),
            negation: Vec::new(),
            special: Vec::new(),
            quantifier_cues: Vec::new(),
            connective_cues: Vec::new(),
        }
    }

    /// Parses lexicon text on top of the built-in defaults.
    ///
    /// Rows under `[predicates]` add to or replace individual predicate
    /// entries. Any cue section present in `text` replaces the default list
    /// for that section.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        Lexicon::parse_over(Lexicon::default(), text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
        Lexicon::parse(&text)
    }

    fn parse_over(mut lex: Lexicon, text: &str) -> Result<Self, LexiconError> {
        let mut section = None;
        let mut cleared: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| LexiconError::Format { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let line = line.trim_start();
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let s = match name.trim() {
                    "predicates" => Section::Predicates,
                    "anaphora" => Section::Anaphora,
                    "negation" => Section::Negation,
                    "special" => Section::Special,
                    "quantifier_cues" => Section::QuantifierCues,
                    "connective_cues" => Section::ConnectiveCues,
                    other => return Err(err(format!("unknown section [{other}]"))),
                };
                if !cleared.contains(&s) {
                    cleared.push(s);
                    match s {
                        Section::Predicates => {}
                        Section::Anaphora => lex.anaphora.clear(),
                        Section::Negation => lex.negation.clear(),
                        Section::Special => lex.special.clear(),
                        Section::QuantifierCues => lex.quantifier_cues.clear(),
                        Section::ConnectiveCues => lex.connective_cues.clear(),
                    }
                }
                section = Some(s);
                continue;
            }
            let Some(section) = section else {
                return Err(err("row outside of any section".into()));
            };
            let (key, value) = match line.split_once('\t') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (line.trim(), None),
            };
            if key.is_empty() {
                return Err(err("empty key".into()));
            }
            let lowercase_key = || -> Result<String, LexiconError> {
                if key.chars().any(|c| c.is_uppercase()) {
                    Err(err(format!("cue '{key}' must be lowercase")))
                } else {
                    Ok(key.to_string())
                }
            };
            let required = || value.filter(|v| !v.is_empty()).ok_or_else(|| err(format!("'{key}' needs a value")));
            match section {
                Section::Predicates => {
                    let lemmas: Vec<String> =
                        required()?.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect();
                    if lemmas.is_empty() {
                        return Err(err(format!("predicate '{key}' has no lemmas")));
                    }
                    if let Some(bad) = lemmas.iter().find(|w| w.chars().any(|c| c.is_uppercase())) {
                        return Err(err(format!("lemma '{bad}' must be lowercase")));
                    }
                    lex.predicates.insert(key.to_string(), lemmas);
                }
                Section::Anaphora => lex.anaphora.push(phrase(&lowercase_key()?)),
                Section::Negation => lex.negation.push(phrase(&lowercase_key()?)),
                Section::Special => lex.special.push(phrase(&lowercase_key()?)),
                Section::QuantifierCues => {
                    let kind = required()?.parse().map_err(err)?;
                    lex.quantifier_cues.push((phrase(&lowercase_key()?), kind));
                }
                Section::ConnectiveCues => {
                    let kind = required()?.parse().map_err(err)?;
                    lex.connective_cues.push((phrase(&lowercase_key()?), kind));
                }
            }
        }
        Ok(lex)
    }

    pub fn lemmas_for(&self, predicate: &str) -> &[String] {
        self.predicates.get(predicate).map(Vec::as_slice).unwrap_or(&[])
    }
}
