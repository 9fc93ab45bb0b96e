"""Walk the G2 cycle and show the character attached to each cluster variable."""

from gencluster.verify import ETA_DICTIONARY, g2_labelled_variables, verify_eta

for name, x in g2_labelled_variables().items():
    print(f"{name} = {x}    ->  L({ETA_DICTIONARY[name]})")
rep = verify_eta(degree_bound=3)
print("checks:", rep.summary(), "all passed" if rep.ok else "FAILURES")
