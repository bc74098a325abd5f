# entry used by the worked example
c:(P -> (Q -> P))
