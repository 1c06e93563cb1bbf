/// A sentence word after lowercasing and punctuation stripping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub lemma: String,
    /// 1-based position in the sentence.
    pub position: usize,
}

impl Token {
    /// Matches either surface form or lemma, so function words the stemmer
    /// mangles still hit cue lists.
    pub fn matches(&self, word: &str) -> bool {
        self.lemma == word || self.text == word
    }
}

const KEEP: &[&str] = &[
    "is",
    "was",
    "has",
    "does",
    "this",
    "his",
    "its",
    "yes",
    "us",
    "thus",
    "less",
    "unless",
    "always",
    "perhaps",
    "whereas",
    "themselves",
    "ourselves",
    "yourselves",
    "series",
    "species",
    "nothing",
    "something",
    "anything",
    "everything",
    "thing",
    "during",
    "bring",
    "king",
    "ring",
    "sing",
    "red",
    "bed",
    "need",
    "speed",
    "seed",
    "feed",
    "indeed",
    "hundred",
    "tetrahedra",
    "dodecahedra",
];

fn ends_with_any(w: &str, suffixes: &[&str]) -> bool {
    suffixes.iter().any(|s| w.ends_with(s))
}

/// Strips plural `-s`/`-es`/`-ies` and verbal `-ed`/`-ing`.
pub fn lemmatize(word: &str) -> String {
    let w = word.to_lowercase();
    let n = w.chars().count();
    if KEEP.contains(&w.as_str()) || !w.is_ascii() {
        return w;
    }
    if n > 4 && w.ends_with("ies") {
        return format!("{}y", &w[..w.len() - 3]);
    }
    if n > 3 && w.ends_with("es") && ends_with_any(&w[..w.len() - 2], &["s", "x", "z", "ch", "sh"]) {
        return w[..w.len() - 2].to_string();
    }
    if n > 3 && w.ends_with('s') && !ends_with_any(&w, &["ss", "us", "is"]) {
        return w[..w.len() - 1].to_string();
    }
    if n > 5 && w.ends_with("ing") {
        return undouble(&w[..w.len() - 3]);
    }
    if n > 4 && w.ends_with("ed") {
        return undouble(&w[..w.len() - 2]);
    }
    w
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let l = b.len();
    if l >= 2 && b[l - 1] == b[l - 2] && !b"aeiouls".contains(&b[l - 1]) {
        stem[..l - 1].to_string()
    } else {
        stem.to_string()
    }
}

/// Splits a sentence into lowercase words. Punctuation separates words;
/// a trailing `n't` becomes its own token and possessive `'s` is dropped.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    let normalized = sentence.replace('’', "'");
    let mut words: Vec<String> = Vec::new();
    for raw in normalized.split(|c: char| !(c.is_alphanumeric() || c == '\'')) {
        let w = raw.trim_matches('\'').to_lowercase();
        if w.is_empty() {
            continue;
        }
        if let Some(stem) = w.strip_suffix("n't") {
            let stem = stem.replace('\'', "");
            if !stem.is_empty() {
                words.push(stem);
            }
            words.push("n't".into());
            continue;
        }
        let w = w.strip_suffix("'s").unwrap_or(&w).replace('\'', "");
        if !w.is_empty() {
            words.push(w);
        }
    }
    words
        .into_iter()
        .enumerate()
        .map(|(i, text)| Token {
            lemma: if text == "n't" { text.clone() } else { lemmatize(&text) },
            text,
            position: i + 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemmas(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.lemma).collect()
    }

    #[test]
    fn tarski_sentence() {
        let toks = tokenize("A large cube is in front of a small cube");
        assert_eq!(toks.len(), 10);
        let cubes: Vec<usize> = toks.iter().filter(|t| t.lemma == "cube").map(|t| t.position).collect();
        assert_eq!(cubes, [3, 10]);
    }

    #[test]
    fn plural_stripping() {
        assert_eq!(lemmas("Apples and oranges are fruits"), ["apple", "and", "orange", "are", "fruit"]);
        assert_eq!(lemmas("boxes cubes dodecahedra bodies"), ["box", "cube", "dodecahedra", "body"]);
        assert_eq!(lemmas("adjoins adjoined adjoining"), ["adjoin", "adjoin", "adjoin"]);
        assert_eq!(lemmas("nothing is less"), ["nothing", "is", "less"]);
    }

    #[test]
    fn empty_and_punctuation() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" ,.;! ").is_empty());
        assert_eq!(lemmas("Folly wasn't hungry."), ["folly", "was", "n't", "hungry"]);
        assert_eq!(lemmas("Max's dog"), ["max", "dog"]);
        assert_eq!(lemmas("Max fed Folly at 2pm, but"), ["max", "fed", "folly", "at", "2pm", "but"]);
    }
}
