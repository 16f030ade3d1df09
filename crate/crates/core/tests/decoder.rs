mod common;

use std::sync::Arc;

use common::{check_against_oracle, random_instance, syl};
use omwa_core::decoder::{build_lattice, convert, FallbackPolicy};
use omwa_core::synth::rng;
use omwa_core::{EngineConfig, NGramStore, OnlineModel, PinyinTable, Syllable, Vocabulary};

fn py(s: &str) -> Vec<Syllable> {
    s.split(' ').map(syl).collect()
}

#[test]
fn kbest_matches_enumeration() {
    let mut r = rng(11);
    for i in 0..300 {
        let inst = random_instance(&mut r);
        for k in [1, 4] {
            if let Err(e) = check_against_oracle(&inst, k) {
                panic!("instance {i}, k={k}, query {:?}: {e}", inst.query);
            }
        }
    }
}

fn builtin() -> Arc<PinyinTable> {
    Arc::new(PinyinTable::builtin())
}

#[test]
fn beijing_ranks_by_weight() {
    let table = builtin();
    let mut vocab = Vocabulary::new(4, 1e-8).with_table(table.clone());
    vocab.iwl_add("北京", Some(&py("bei jing")), 10.0).unwrap();
    vocab.iwl_add("背景", Some(&py("bei jing")), 5.0).unwrap();
    let store = NGramStore::new(4);
    let model = OnlineModel {
        vocab: &vocab,
        store: &store,
        backoff: 0.4,
    };
    let c = EngineConfig::default();
    let r = convert(&py("bei jing"), &model, &table, FallbackPolicy::Always, 10, c.alt_margin).unwrap();
    assert_eq!(&r.texts()[..2], ["北京", "背景"]);
    assert!(r.len() <= 10);
}

#[test]
fn partial_candidates_follow_full_conversion() {
    let table = builtin();
    let mut vocab = Vocabulary::new(4, 1e-8).with_table(table.clone());
    for (w, p, x) in [
        ("自然语言", "zi ran yu yan", 50.0),
        ("自然", "zi ran", 40.0),
        ("语言", "yu yan", 30.0),
        ("处理", "chu li", 30.0),
        ("自燃", "zi ran", 5.0),
        ("孜然", "zi ran", 3.0),
    ] {
        vocab.iwl_add(w, Some(&py(p)), x).unwrap();
    }
    let mut store = NGramStore::new(4);
    for _ in 0..3 {
        store.add_sequence(&["自然语言", "处理"]);
    }
    let model = OnlineModel {
        vocab: &vocab,
        store: &store,
        backoff: 0.4,
    };
    let margin = EngineConfig::default().alt_margin;
    let r = convert(&py("zi ran yu yan chu li"), &model, &table, FallbackPolicy::Always, 5, margin).unwrap();
    assert_eq!(r.texts(), ["自然语言处理", "自然语言", "自然", "自燃", "孜然"]);
    let consumed: Vec<usize> = r.candidates.iter().map(|c| c.syllables).collect();
    assert_eq!(consumed, [6, 4, 2, 2, 2]);
}

#[test]
fn single_syllable_lists_characters() {
    let table = builtin();
    let vocab = Vocabulary::new(4, 1e-8).with_table(table.clone());
    let store = NGramStore::new(4);
    let model = OnlineModel {
        vocab: &vocab,
        store: &store,
        backoff: 0.4,
    };
    let r = convert(&py("zi"), &model, &table, FallbackPolicy::Always, 10, 6.9).unwrap();
    assert_eq!(r.len(), 10);
    assert!(r.candidates.iter().all(|c| c.text.chars().count() == 1 && c.syllables == 1));
}

#[test]
fn words_never_exceed_maxlen() {
    let table = builtin();
    let mut vocab = Vocabulary::new(2, 1e-8).with_table(table.clone());
    vocab.iwl_add("北京", Some(&py("bei jing")), 5.0).unwrap();
    vocab.iwl_add("北京大", Some(&py("bei jing da")), 50.0).unwrap();
    assert!(!vocab.contains("北京大"));
    let store = NGramStore::new(2);
    let model = OnlineModel {
        vocab: &vocab,
        store: &store,
        backoff: 0.4,
    };
    let lattice = build_lattice(&py("bei jing da xue"), &model, &table, FallbackPolicy::Always).unwrap();
    assert!(lattice.edges().iter().all(|e| e.end - e.start <= 2));
}

#[test]
fn uncovered_policy_keeps_lattice_connected() {
    let table = builtin();
    let mut vocab = Vocabulary::new(4, 1e-8).with_table(table.clone());
    vocab.iwl_add("北京", Some(&py("bei jing")), 5.0).unwrap();
    let store = NGramStore::new(2);
    let model = OnlineModel {
        vocab: &vocab,
        store: &store,
        backoff: 0.4,
    };
    let lattice = build_lattice(&py("bei jing shang hai"), &model, &table, FallbackPolicy::Uncovered).unwrap();
    assert!(lattice.is_connected());
    assert!(lattice.outgoing(0).iter().all(|&id| !lattice.edge(id).fallback));
    assert!(lattice.outgoing(1).iter().all(|&id| lattice.edge(id).fallback));
}
