use survopt::repro::{self, Status, TABLE_IDS};
use survopt::{Convention, Error};

#[test]
fn every_table_runs_and_writes() {
    let dir = std::env::temp_dir().join(format!("survopt-repro-{}", std::process::id()));
    for id in TABLE_IDS {
        let r = repro::run(id, None).unwrap();
        assert!(!r.cells.is_empty(), "{id}");
        for c in &r.cells {
            assert!(c.computed.is_finite(), "{id} {}/{}", c.row, c.column);
            assert_eq!(c.status == Status::Pass, c.rel_err <= c.tolerance && id != "ch5-table1");
            assert!(c.status == Status::Pass || !c.note.is_empty());
        }
        let paths = r.write(&dir).unwrap();
        let diff = std::fs::read_to_string(&paths[2]).unwrap();
        assert!(diff.starts_with("row,column,reference,computed,rel_err,tolerance,status,note\n"));
        assert!(!diff.contains('\r'));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn frozen_conventions() {
    assert_eq!(repro::run("ch2-4.2", None).unwrap().convention, Convention::SignConsistent);
    assert_eq!(repro::run("ch2-4.1", None).unwrap().convention, Convention::StrictPrint);
    let over = repro::run("ch2-4.2", Some(Convention::StrictPrint)).unwrap();
    assert_eq!(over.convention, Convention::StrictPrint);
}

#[test]
fn horizon_table_is_documented_wholesale() {
    let r = repro::run("ch5-table1", None).unwrap();
    assert_eq!(r.count(Status::Pass), 0);
}

#[test]
fn mean_row_is_exactly_100() {
    let r = repro::run("ch1-5.2", None).unwrap();
    assert_eq!(r.cell("mean", "pre").unwrap().computed, 100.0);
    assert!(r.computed_csv.starts_with("estimator,mse,pre\n"));
}

#[test]
fn runs_are_byte_identical() {
    for id in TABLE_IDS {
        let (a, b) = (repro::run(id, None).unwrap(), repro::run(id, None).unwrap());
        assert_eq!(a.computed_csv, b.computed_csv);
        assert_eq!(a.diff_csv(), b.diff_csv());
    }
}

#[test]
fn unknown_table_rejected() {
    assert!(matches!(repro::run("ch6-1.1", None), Err(Error::InvalidInput(_))));
}
