//! Small hand-annotated story bundles used by tests, demos, and docs.
//!
//! The stories are transcriptions of real resolver output over visual
//! stories: pre-tokenized sentences with possessive clitics split off, and
//! coreference chains over token spans. They cover the interesting shapes:
//! two tightly-tracked characters, a crowded dinner scene with group
//! mentions and nested spans, an unnamed-protagonist scene, and a
//! single-sentence caption with no chains at all.

use crate::ingest::StoryBundle;
use crate::model::{
    Chain, ChainId, CharacterName, ImageAppearance, ImageSequence, Mention, Story,
};

fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

fn chain(id: u32, mentions: &[(usize, usize, usize)]) -> Chain {
    Chain::new(
        ChainId(id),
        mentions.iter().map(|&(s, a, b)| Mention::new(s, a, b)).collect(),
    )
}

fn names(list: &[&str]) -> Vec<CharacterName> {
    list.iter().map(|n| CharacterName::new(*n)).collect()
}

fn images_with_everyone(count: usize, cast: &[&str]) -> ImageSequence {
    ImageSequence::new(
        (0..count)
            .map(|j| ImageAppearance::new(format!("img{j}"), cast.iter().copied()))
            .collect(),
    )
}

/// Two characters tracked densely through five sentences and five images;
/// both modalities agree perfectly, so the story's MCC is 1.
pub fn two_character_reconciliation() -> StoryBundle {
    let story = Story {
        story_id: "reconciliation".into(),
        sentences: vec![
            tokens("Keanu tells Charlize how much she loves her and asks for forgiveness ."),
            tokens("Charlize says it is very difficult to forgive him because he hurt her so much ."),
            tokens("Charlize cries a lot and Keanu Loses forgiveness ."),
            tokens("Charlize stops crying and says she loves him so much ."),
            tokens("who will trust him one more time ."),
        ],
        chains: vec![
            chain(
                1,
                &[(0, 0, 0), (0, 5, 5), (1, 8, 8), (1, 10, 10), (2, 5, 5), (3, 7, 7), (4, 3, 3)],
            ),
            chain(
                2,
                &[(0, 2, 2), (0, 7, 7), (1, 0, 0), (1, 12, 12), (2, 0, 0), (3, 0, 0), (3, 5, 5)],
            ),
        ],
        roster: names(&["Keanu", "Charlize"]),
        images: Some(images_with_everyone(5, &["Keanu", "Charlize"])),
    };
    StoryBundle::new(story, "human")
}

/// A crowded dinner scene: five named characters, group chains over plural
/// mentions ("Ashley and Val"), nested spans, and possessive clitics.
pub fn gala_dinner() -> StoryBundle {
    let story = Story {
        story_id: "gala-dinner".into(),
        sentences: vec![
            tokens("Ashley and Val are sitting together at a table at the Gala ."),
            tokens(
                "Tom was sitting across from them , and Tom leans in to ask what their secret \
                 to a loving and long marriage is .",
            ),
            tokens("Flattered , Ashley and Val smile ."),
            tokens("Ashley starts to tell Tom that Val does everything she tells him to ."),
            tokens(
                "Robert got stuck sitting at the kids ' table at the Gala , but he is starting \
                 at Val and Ashley 's table while wishing he could be sitting there with them .",
            ),
            tokens(
                "After the Gala , Val , Ashley , and everyone at their table are standing \
                 outside the hotel discussing when and where their next party will be .",
            ),
            tokens("Robert is walking up behind them to join their conversation ."),
        ],
        chains: vec![
            // Ashley
            chain(1, &[(0, 0, 0), (2, 2, 2), (3, 0, 0), (3, 9, 9), (4, 20, 20), (5, 6, 6)]),
            // Val
            chain(2, &[(0, 2, 2), (2, 4, 4), (3, 6, 6), (3, 11, 11), (4, 18, 18), (5, 4, 4)]),
            // The couple as a group: "Ashley and Val", "them", "their"
            chain(
                3,
                &[(0, 0, 2), (1, 5, 5), (1, 14, 14), (2, 2, 4), (4, 18, 21), (4, 31, 31)],
            ),
            // The table
            chain(4, &[(0, 7, 8), (4, 18, 22), (5, 11, 12)]),
            // The Gala
            chain(5, &[(0, 10, 11), (4, 10, 11), (5, 1, 2)]),
            // Tom
            chain(6, &[(1, 0, 0), (1, 8, 8), (3, 4, 4)]),
            // Robert
            chain(7, &[(4, 0, 0), (4, 14, 14), (4, 25, 25), (6, 0, 0)]),
            // The whole table party
            chain(8, &[(5, 4, 12), (5, 11, 11), (5, 22, 22), (6, 5, 5), (6, 8, 8)]),
        ],
        roster: names(&["Ashley", "Val", "Tom", "Robert", "Amy"]),
        images: None,
    };
    StoryBundle::new(story, "human")
}

/// A scene whose protagonist is mostly realized as "the police officer":
/// only one roster name appears, everything else stays unlabeled.
pub fn press_scene() -> StoryBundle {
    let story = Story {
        story_id: "press-scene".into(),
        sentences: vec![
            tokens("The police officer closed the zipper of the body bag ."),
            tokens("Journalists were already flooding the place ."),
            tokens(
                "Bruce asked the officer how the hell all these journalists know already \
                 about the dead body .",
            ),
            tokens("The police officer looked desperate ."),
            tokens("He said that every time had been like that in the last months ."),
            tokens("They mast have a snitch in the station ."),
            tokens("He left Bruce and headed to the crowd of journalists ."),
            tokens("It was about time for some order there ."),
        ],
        chains: vec![
            // The police officer
            chain(1, &[(0, 0, 2), (2, 2, 3), (3, 0, 2), (4, 0, 0), (6, 0, 0)]),
            // The journalists
            chain(2, &[(1, 0, 0), (2, 7, 9), (6, 6, 9)]),
            // Bruce
            chain(3, &[(2, 0, 0), (6, 2, 2)]),
        ],
        roster: names(&["Bruce"]),
        images: None,
    };
    StoryBundle::new(story, "human")
}

/// A one-sentence caption without any coreference annotation: every
/// pair-based metric is absent here, not zero.
pub fn terse_caption() -> StoryBundle {
    let story = Story {
        story_id: "terse-caption".into(),
        sentences: vec![tokens("Val and Tom attend a dinner party at a local restaurant .")],
        chains: vec![],
        roster: names(&["Ashley", "Val", "Tom", "Robert", "Amy"]),
        images: None,
    };
    StoryBundle::new(story, "model-a")
}

/// All bundled fixtures.
pub fn all() -> Vec<StoryBundle> {
    vec![two_character_reconciliation(), gala_dinner(), press_scene(), terse_caption()]
}
