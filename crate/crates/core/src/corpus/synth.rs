use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rules::DifficultyLevel;

use super::{Attempt, Domain, Exercise, Submission, Verdict};

/// Parameters of the synthetic corpus generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub exercises: usize,
    /// Mean number of students per exercise (actual counts vary by ±25%).
    pub students: usize,
    /// 1 ties student performance entirely to the exercise's level, 0 makes it unrelated.
    pub monotonicity: f64,
    /// Share of students needing 20 to 40 attempts.
    pub outlier_rate: f64,
    /// Share of students who give up without a correct answer.
    pub never_correct_rate: f64,
    /// Share of wrong attempts that are ill-formed.
    pub ill_formed_rate: f64,
    /// Share of wrong attempts left blank.
    pub missing_rate: f64,
    /// Per-exercise performance noise amplitude.
    pub noise: f64,
    pub task_types: Vec<String>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            exercises: 200,
            students: 40,
            monotonicity: 1.0,
            outlier_rate: 0.02,
            never_correct_rate: 0.05,
            ill_formed_rate: 0.1,
            missing_rate: 0.05,
            noise: 0.1,
            task_types: vec!["looking_at_world".into(), "world_check".into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SynthSpecError {
    #[error("unknown generator parameter '{0}'")]
    UnknownKey(String),
    #[error("bad value '{value}' for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
}

impl SynthSpec {
    /// Sets one parameter from its textual `key`/`value` form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SynthSpecError> {
        let bad = |reason: String| SynthSpecError::BadValue { key: key.into(), value: value.into(), reason };
        let count = || value.parse::<usize>().map_err(|e| bad(e.to_string()));
        let rate = || {
            let r = value.parse::<f64>().map_err(|e| bad(e.to_string()))?;
            if (0.0..=1.0).contains(&r) {
                Ok(r)
            } else {
                Err(bad("must lie in [0, 1]".into()))
            }
        };
        match key {
            "n" | "exercises" => self.exercises = count()?,
            "students" => {
                self.students = count()?;
                if self.students == 0 {
                    return Err(bad("need at least one student".into()));
                }
            }
            "monotonicity" => self.monotonicity = rate()?,
            "outliers" | "outlier_rate" => self.outlier_rate = rate()?,
            "never_correct" | "never_correct_rate" => self.never_correct_rate = rate()?,
            "ill_formed" | "ill_formed_rate" => self.ill_formed_rate = rate()?,
            "missing" | "missing_rate" => self.missing_rate = rate()?,
            "noise" => self.noise = rate()?,
            "task_types" => {
                self.task_types = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if self.task_types.is_empty() {
                    return Err(bad("need at least one task type".into()));
                }
            }
            other => return Err(SynthSpecError::UnknownKey(other.into())),
        }
        Ok(())
    }
}

/// Sentence pattern with reference formalizations. Placeholders: `{a}`/`{b}`
/// constants, `{S}`/`{T}` shape predicates (`{s}`/`{t}` their nouns), `{Z}`/`{Y}`
/// size predicates (`{z}`/`{y}` adjectives), `{R}` relation (`{r}` phrase).
struct Template {
    level: DifficultyLevel,
    sentence: &'static str,
    /// First entry is the most popular formalization.
    correct: &'static [&'static str],
}

const TEMPLATES: &[Template] = &[
    Template { level: DifficultyLevel::VeryEasy, sentence: "{a} is a {s}", correct: &["{S}({a})"] },
    Template {
        level: DifficultyLevel::VeryEasy,
        sentence: "{a} is {z} and {b} is a {t}",
        correct: &["{Z}({a}) & {T}({b})", "{T}({b}) & {Z}({a})"],
    },
    Template { level: DifficultyLevel::VeryEasy, sentence: "{a} is {r} {b}", correct: &["{R}({a},{b})"] },
    Template {
        level: DifficultyLevel::Easy,
        sentence: "Some {s} is {z}",
        correct: &["exists x ({S}(x) & {Z}(x))", "exists x ({Z}(x) & {S}(x))"],
    },
    Template { level: DifficultyLevel::Easy, sentence: "Every {s} is {z}", correct: &["forall x ({S}(x) -> {Z}(x))"] },
    Template {
        level: DifficultyLevel::Easy,
        sentence: "There is a {s} {r} {a}",
        correct: &["exists x ({S}(x) & {R}(x,{a}))"],
    },
    Template {
        level: DifficultyLevel::Medium,
        sentence: "Every {z} {s} is {r} {a}",
        correct: &["forall x (({Z}(x) & {S}(x)) -> {R}(x,{a}))", "forall x ({Z}(x) -> ({S}(x) -> {R}(x,{a})))"],
    },
    Template {
        level: DifficultyLevel::Medium,
        sentence: "Each {s} is {z} or {y}",
        correct: &["forall x ({S}(x) -> ({Z}(x) | {Y}(x)))"],
    },
    Template {
        // logic table says medium; the double negation escalates it
        level: DifficultyLevel::Difficult,
        sentence: "No {z} {s} is not {r} {a}",
        correct: &["forall x (({Z}(x) & {S}(x)) -> {R}(x,{a}))"],
    },
    Template {
        level: DifficultyLevel::Difficult,
        sentence: "Every {s} is {r} some {t}",
        correct: &["forall x ({S}(x) -> exists y ({T}(y) & {R}(x,y)))"],
    },
    Template {
        level: DifficultyLevel::Difficult,
        sentence: "Every {z} {s} is {r} a {t}",
        correct: &["forall x (({Z}(x) & {S}(x)) -> exists y ({T}(y) & {R}(x,y)))"],
    },
    Template {
        level: DifficultyLevel::Advanced,
        sentence: "Every {s} that is {r} every {t} is {z}",
        correct: &["forall x (({S}(x) & forall y ({T}(y) -> {R}(x,y))) -> {Z}(x))"],
    },
    Template {
        level: DifficultyLevel::Advanced,
        sentence: "If every {s} is {z}, then every {t} is {y}",
        correct: &["forall x ({S}(x) -> {Z}(x)) -> forall y ({T}(y) -> {Y}(y))"],
    },
];

const SHAPES: [(&str, &str); 3] = [("Cube", "cube"), ("Tet", "tetrahedron"), ("Dodec", "dodecahedron")];
const SIZES: [(&str, &str); 3] = [("Small", "small"), ("Medium", "medium"), ("Large", "large")];
const RELATIONS: [(&str, &str); 4] =
    [("LeftOf", "left of"), ("RightOf", "right of"), ("FrontOf", "in front of"), ("BackOf", "in back of")];
const CONSTANTS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Two distinct entries of `table`.
fn pick_two<T: Copy, R: Rng>(table: &[T], rng: &mut R) -> (T, T) {
    let i = rng.gen_range(0..table.len());
    let j = (i + rng.gen_range(1..table.len())) % table.len();
    (table[i], table[j])
}

struct Instance {
    level: DifficultyLevel,
    sentence: String,
    correct: Vec<String>,
}

fn instantiate<R: Rng>(t: &Template, rng: &mut R) -> Instance {
    let (s, tt) = pick_two(&SHAPES, rng);
    let (z, y) = pick_two(&SIZES, rng);
    let r = RELATIONS[rng.gen_range(0..RELATIONS.len())];
    let (a, b) = pick_two(&CONSTANTS, rng);
    let fill = |text: &str| {
        [
            ("{a}", a),
            ("{b}", b),
            ("{S}", s.0),
            ("{s}", s.1),
            ("{T}", tt.0),
            ("{t}", tt.1),
            ("{Z}", z.0),
            ("{z}", z.1),
            ("{Y}", y.0),
            ("{y}", y.1),
            ("{R}", r.0),
            ("{r}", r.1),
        ]
        .iter()
        .fold(text.to_string(), |acc, (k, v)| acc.replace(k, v))
    };
    let mut sentence = fill(t.sentence);
    if let Some(first) = sentence.get(..1) {
        sentence = first.to_uppercase() + &sentence[1..];
    }
    Instance { level: t.level, sentence, correct: t.correct.iter().map(|c| fill(c)).collect() }
}

const MAX_ATTEMPTS: usize = 15;

fn wrong_attempt<R: Rng>(spec: &SynthSpec, reference: &str, rng: &mut R) -> Attempt {
    let u: f64 = rng.gen();
    if u < spec.ill_formed_rate {
        Attempt::new(&reference[..reference.len() - 1], Verdict::IllFormed)
    } else if u < spec.ill_formed_rate + spec.missing_rate {
        Attempt::new("", Verdict::Missing)
    } else {
        Attempt::new(format!("~({reference})"), Verdict::Incorrect)
    }
}

/// Deterministic corpus whose student performance degrades with exercise level
/// to the degree set by `spec.monotonicity`.
pub fn generate_synthetic_corpus(spec: &SynthSpec, seed: u64) -> Vec<Exercise> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let task_types = if spec.task_types.is_empty() { vec!["world_check".to_string()] } else { spec.task_types.clone() };
    (0..spec.exercises)
        .map(|i| {
            let template = &TEMPLATES[rng.gen_range(0..TEMPLATES.len())];
            let inst = instantiate(template, &mut rng);
            let level = inst.level.code() as f64 / 4.0;
            let difficulty = spec.monotonicity * level + (1.0 - spec.monotonicity) * rng.gen::<f64>();
            let jitter = spec.noise * (2.0 * rng.gen::<f64>() - 1.0);
            let p_first = (0.95 - 0.7 * difficulty + jitter).clamp(0.02, 0.98);
            let p_retry = (0.8 - 0.55 * difficulty + jitter).clamp(0.05, 0.95);

            let spread = spec.students / 4;
            let n_students = spec.students - spread + rng.gen_range(0..=2 * spread);
            let submissions = (0..n_students.max(1))
                .map(|j| {
                    let reference = &inst.correct[0];
                    let solved_at = if rng.gen::<f64>() < spec.never_correct_rate {
                        None
                    } else if rng.gen::<f64>() < spec.outlier_rate {
                        Some(rng.gen_range(20..=40))
                    } else if rng.gen::<f64>() < p_first {
                        Some(1)
                    } else {
                        let mut k = 2;
                        while k <= MAX_ATTEMPTS && rng.gen::<f64>() >= p_retry {
                            k += 1;
                        }
                        (k <= MAX_ATTEMPTS).then_some(k)
                    };
                    let wrong = solved_at.map_or_else(|| rng.gen_range(1..=4), |k| k - 1);
                    let mut attempts: Vec<Attempt> =
                        (0..wrong).map(|_| wrong_attempt(spec, reference, &mut rng)).collect();
                    if solved_at.is_some() {
                        let variant = if inst.correct.len() > 1 && rng.gen::<f64>() < 0.3 {
                            rng.gen_range(1..inst.correct.len())
                        } else {
                            0
                        };
                        attempts.push(Attempt::new(inst.correct[variant].clone(), Verdict::Correct));
                    }
                    Submission { student: format!("st{j}"), attempts }
                })
                .collect();
            Exercise {
                id: format!("syn-{i:04}"),
                sentence: inst.sentence,
                domain: Domain::Tarski,
                task_type: task_types[i % task_types.len()].clone(),
                submissions,
            }
        })
        .collect()
}

/// Level each generated exercise was built for, keyed by sentence pattern.
#[cfg(test)]
pub(crate) fn template_levels() -> impl Iterator<Item = (DifficultyLevel, String, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    TEMPLATES.iter().flat_map(move |t| {
        (0..8)
            .map(|_| {
                let inst = instantiate(t, &mut rng);
                (inst.level, inst.sentence, inst.correct)
            })
            .collect::<Vec<_>>()
    })
}
