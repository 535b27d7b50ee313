//! Generated corpora with known structure, used for desk-scale training
//! checks and the runnable examples.
//!
//! A [`Scene`] picks one word from each of five slots (adjective, subject,
//! verb, object, place); [`TEMPLATES`] turn a scene into differently worded
//! captions of the same content.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{CaptionGroup, ParagraphRecord, RelatednessRecord};
use crate::numerics::seeded_rng;
use crate::{Error, Result};

pub const ADJECTIVES: [&str; 8] = ["young", "old", "small", "tall", "happy", "busy", "little", "big"];
pub const SUBJECTS: [&str; 8] = ["man", "woman", "boy", "girl", "dog", "cat", "chef", "player"];
/// Progressive and third-person forms.
pub const VERBS: [(&str, &str); 8] = [
    ("slicing", "slices"),
    ("playing", "plays"),
    ("riding", "rides"),
    ("eating", "eats"),
    ("cutting", "cuts"),
    ("throwing", "throws"),
    ("holding", "holds"),
    ("washing", "washes"),
];
pub const OBJECTS: [&str; 8] = ["tomato", "guitar", "bike", "apple", "onion", "ball", "baby", "car"];
pub const PLACES: [&str; 8] = ["kitchen", "park", "street", "field", "room", "beach", "garden", "stage"];

/// Caption patterns; `{a}` adjective, `{s}` subject, `{ving}`/`{vs}` verb
/// forms, `{o}` object, `{p}` place.
pub const TEMPLATES: [&str; 8] = [
    "a {a} {s} is {ving} a {o} in the {p}",
    "the {a} {s} {vs} the {o} at the {p}",
    "in the {p} a {s} {vs} a {o}",
    "a {s} {vs} a {o}",
    "there is a {a} {s} {ving} a {o}",
    "the {s} is {ving} the {o}",
    "at the {p} the {a} {s} is {ving} a {o}",
    "a {s} in the {p} {vs} the {o}",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scene {
    pub adjective: usize,
    pub subject: usize,
    pub verb: usize,
    pub object: usize,
    pub place: usize,
}

impl Scene {
    pub fn slots(&self) -> [usize; 5] {
        [self.adjective, self.subject, self.verb, self.object, self.place]
    }

    pub fn from_slots(s: [usize; 5]) -> Self {
        Self { adjective: s[0], subject: s[1], verb: s[2], object: s[3], place: s[4] }
    }

    fn from_index(i: usize) -> Self {
        Self::from_slots([i % 8, (i / 8) % 8, (i / 64) % 8, (i / 512) % 8, (i / 4096) % 8])
    }

    /// Number of slots on which two scenes agree.
    pub fn overlap(&self, other: &Scene) -> usize {
        self.slots().iter().zip(other.slots()).filter(|(a, b)| **a == *b).count()
    }

    pub fn caption(&self, template: usize) -> String {
        let (ving, vs) = VERBS[self.verb];
        TEMPLATES[template % TEMPLATES.len()]
            .replace("{a}", ADJECTIVES[self.adjective])
            .replace("{s}", SUBJECTS[self.subject])
            .replace("{ving}", ving)
            .replace("{vs}", vs)
            .replace("{o}", OBJECTS[self.object])
            .replace("{p}", PLACES[self.place])
    }
}

/// `n` distinct scenes.
pub fn scenes(n: usize, seed: u64) -> Result<Vec<Scene>> {
    const TOTAL: usize = 8 * 8 * 8 * 8 * 8;
    if n > TOTAL {
        return Err(Error::invalid(format!("at most {TOTAL} distinct scenes")));
    }
    let idx = rand::seq::index::sample(&mut seeded_rng(seed), TOTAL, n);
    Ok(idx.into_iter().map(Scene::from_index).collect())
}

/// `n_groups` groups, each captioning one scene with the first `per_group`
/// templates.
pub fn caption_groups(n_groups: usize, per_group: usize, seed: u64) -> Result<Vec<CaptionGroup>> {
    if per_group == 0 || per_group > TEMPLATES.len() {
        return Err(Error::invalid(format!("captions per group must be in 1..={}", TEMPLATES.len())));
    }
    Ok(scenes(n_groups, seed)?
        .iter()
        .enumerate()
        .map(|(i, s)| CaptionGroup {
            group_id: format!("scene{i}"),
            captions: (0..per_group).map(|t| s.caption(t)).collect(),
        })
        .collect())
}

/// Paragraphs of 2 to `max_sentences` captions about one subject and place
/// doing different things; the summary is template 0 of the first scene.
pub fn summary_records(n: usize, max_sentences: usize, seed: u64) -> Result<Vec<ParagraphRecord>> {
    if max_sentences < 2 {
        return Err(Error::invalid("paragraphs need room for at least 2 sentences"));
    }
    let mut rng = seeded_rng(seed);
    let heads = scenes(n, seed ^ 0x9e37)?;
    Ok(heads
        .into_iter()
        .map(|head| {
            let len = rng.gen_range(2..=max_sentences);
            let detailed = (0..len)
                .map(|j| {
                    let s = if j == 0 {
                        head
                    } else {
                        Scene { verb: rng.gen_range(0..8), object: rng.gen_range(0..8), ..head }
                    };
                    s.caption(rng.gen_range(1..TEMPLATES.len()))
                })
                .collect();
            ParagraphRecord { detailed, summary: head.caption(0) }
        })
        .collect())
}

/// Scored pairs worded with `template`. Each pair shares `k` of the five
/// scene slots, k uniform in 0..=5, and its score is `1 + 4k/5`.
pub fn relatedness_records(n: usize, template: usize, seed: u64) -> Vec<RelatednessRecord> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|i| {
            let a: [usize; 5] = std::array::from_fn(|_| rng.gen_range(0..8));
            let k = rng.gen_range(0..=5);
            let mut changed = [0, 1, 2, 3, 4];
            changed.shuffle(&mut rng);
            let mut b = a;
            for &slot in &changed[k..] {
                b[slot] = (a[slot] + rng.gen_range(1..8)) % 8;
            }
            let (sa, sb) = (Scene::from_slots(a), Scene::from_slots(b));
            RelatednessRecord {
                id: i.to_string(),
                sentence_a: sa.caption(template),
                sentence_b: sb.caption(template),
                gold_score: 1.0 + 4.0 * sa.overlap(&sb) as f64 / 5.0,
            }
        })
        .collect()
}
