use proptest::prelude::*;
use rand::Rng;

use mutsel_core::abstraction::{is_abstract_id, render, tokenize, Abstractor, Allowlist, IdCategory, Token, TokenKind};
use mutsel_core::seed::rng;
use mutsel_core::toy::{self, ToyConfig};

const FUNCS: [&str; 5] = ["load", "store", "parseAll", "emit", "check"];
const TYPES: [&str; 3] = ["Node", "Item", "Buffer"];
const VARS: [&str; 6] = ["a", "b", "count", "total", "node", "name"];
const STRINGS: [&str; 4] = ["\"x\"", "\"hello\"", "\"two words\"", "\"\""];

/// Random mini-language unit built from a small grammar; names repeat
/// across functions so numbering and reuse both get exercised.
fn random_unit(seed: u64) -> String {
    let mut r = rng(seed);
    let mut out = String::new();
    let pick = |r: &mut rand_chacha::ChaCha8Rng, xs: &[&'static str]| xs[r.gen_range(0..xs.len())];
    for _ in 0..r.gen_range(1..=3) {
        let ty = pick(&mut r, &TYPES);
        let f = pick(&mut r, &FUNCS);
        let p = pick(&mut r, &VARS);
        out.push_str(&format!("int {f} ( {ty} {p} , int q ) {{\n"));
        let mut open = 0;
        for _ in 0..r.gen_range(1..10) {
            let v = pick(&mut r, &VARS);
            let w = pick(&mut r, &VARS);
            let line = match r.gen_range(0..9) {
                0 => format!("int {v} = {w} + {} ;", r.gen_range(0..9)),
                1 => format!("String {v} = {} ;", pick(&mut r, &STRINGS)),
                2 => format!("{} {v} = {} ( {w} ) ;", pick(&mut r, &TYPES), pick(&mut r, &FUNCS)),
                3 => format!("{v} = {} ( {w} , q ) ;", pick(&mut r, &FUNCS)),
                4 => {
                    open += 1;
                    format!("if ( {v} > {w} ) {{")
                }
                5 => {
                    open += 1;
                    format!("while ( {v} < 10 ) {{")
                }
                6 if open > 0 => {
                    open -= 1;
                    "}".to_string()
                }
                7 => format!("// touch {v} and {w}"),
                _ => format!("return {v} ;"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        for _ in 0..open {
            out.push_str("}\n");
        }
        out.push_str("}\n");
    }
    out
}

fn texts(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.text.clone()).collect()
}

fn code_tokens(src: &str) -> Vec<Token> {
    tokenize(src)
        .unwrap()
        .into_iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .collect()
}

fn check_unit(src: &str) -> Result<(), TestCaseError> {
    let abstractor = Abstractor::default();
    let tokens = tokenize(src).unwrap();
    let once = abstractor.abstract_unit(&tokens);
    let code = code_tokens(src);
    prop_assert_eq!(once.tokens.len(), code.len());

    // Determinism.
    prop_assert_eq!(&abstractor.abstract_unit(&tokens), &once);

    // Idempotence, both on the token list and on the rendered text.
    prop_assert_eq!(
        texts(&abstractor.abstract_unit(&once.tokens).tokens),
        texts(&once.tokens)
    );
    let reparsed = tokenize(&render(&texts(&once.tokens))).unwrap();
    prop_assert_eq!(texts(&abstractor.abstract_unit(&reparsed).tokens), texts(&once.tokens));

    // Every substitution is an ID that maps back to the original text, and
    // only user names and string literals are substituted.
    let allow = Allowlist::default();
    for (orig, abs) in code.iter().zip(&once.tokens) {
        if orig.text != abs.text {
            prop_assert!(is_abstract_id(&abs.text), "{} -> {}", orig.text, abs.text);
            prop_assert_eq!(once.map.original(&abs.text), Some(orig.text.as_str()));
        }
        match orig.kind {
            TokenKind::StringLiteral => prop_assert!(abs.text.starts_with("lr_")),
            TokenKind::Identifier if !allow.contains(&orig.text) => prop_assert!(is_abstract_id(&abs.text)),
            _ => prop_assert_eq!(&orig.text, &abs.text),
        }
    }

    // First-occurrence numbering per category.
    for cat in IdCategory::ALL {
        let prefix = format!("{}_", cat.prefix());
        let mut seen: Vec<&str> = Vec::new();
        for (orig, abs) in code.iter().zip(&once.tokens) {
            if abs.text.starts_with(&prefix) && orig.text != abs.text && !seen.contains(&orig.text.as_str()) {
                seen.push(&orig.text);
                prop_assert_eq!(&abs.text, &format!("{prefix}{}", seen.len()));
            }
        }
        prop_assert_eq!(once.map.entries(cat).len(), seen.len());
    }

    // Unabstracted mode only drops comments.
    let raw = Abstractor::unabstracted().abstract_unit(&tokens);
    prop_assert_eq!(raw.tokens, code);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn grammar_units(seed in any::<u64>()) {
        check_unit(&random_unit(seed))?;
    }

    #[test]
    fn toy_units(seed in any::<u64>()) {
        let mut cfg = ToyConfig::new(seed);
        cfg.projects = 1;
        cfg.units_per_project = 1;
        let corpus = toy::generate(&cfg).unwrap();
        for src in corpus.units().values() {
            check_unit(src)?;
        }
    }
}

#[test]
fn option_declaration_layout() {
    let tokens = tokenize("final String [] values = getOptionValues ( option ) ;").unwrap();
    assert_eq!(tokens.len(), 10);
    for name in ["values", "getOptionValues", "option"] {
        let t = tokens.iter().find(|t| t.text == name).unwrap();
        assert_eq!(t.kind, TokenKind::Identifier);
    }
}
