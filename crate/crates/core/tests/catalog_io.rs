use invgen::catalog::{parse_descriptor, standard_catalog, GroupDescriptor, GroupJson};

#[test]
fn every_catalog_entry_round_trips_and_resolves() {
    for desc in standard_catalog() {
        let text = desc.to_string();
        let again = parse_descriptor(&text).unwrap();
        assert_eq!(again, desc);
        assert_eq!(again.to_string(), text);
        let group = desc.resolve().unwrap();
        assert_eq!(Some(group.order()), desc.expected_order(), "{text}");

        let json = serde_json::to_string(&GroupJson::from_group(&group)).unwrap();
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        let rebuilt = back.to_group().unwrap();
        assert_eq!(rebuilt.order(), group.order());
        assert_eq!(rebuilt.generators(), group.generators());
    }
}

#[test]
fn descriptors_serialize_as_normalized_strings() {
    let d = parse_descriptor(" PSL( 2 , 7 ) ^ 2 ").unwrap();
    assert_eq!(serde_json::to_string(&d).unwrap(), "\"PSL(2,7)^2\"");
    let back: GroupDescriptor = serde_json::from_str("\"A5^2\"").unwrap();
    assert_eq!(back.resolve().unwrap().order(), 3600);
    assert!(serde_json::from_str::<GroupDescriptor>("\"B5\"").is_err());
}

#[test]
fn explicit_descriptor_resolves_to_its_generators() {
    let d = parse_descriptor("perm:6:(1,2,3)(4,5,6);(1,4)(2,5)(3,6)").unwrap();
    let g = d.resolve().unwrap();
    assert_eq!((g.degree(), g.order()), (6, 6));
    assert_eq!(parse_descriptor(&d.to_string()).unwrap(), d);
}

#[test]
fn unsupported_parameters_are_rejected() {
    for bad in ["D7", "PSL(2,4)", "PSL(2,37)", "C0", "A5^0", "perm:3:(1,4)", "S", ""] {
        let rejected = parse_descriptor(bad).and_then(|d| d.resolve()).is_err();
        assert!(rejected, "{bad:?} accepted");
    }
}
