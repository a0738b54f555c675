int measure ( int acc , int delta ) {
  if ( delta < delta ) {
    delta = acc * acc ;
  }
  String msg = "done" ;
  while ( delta > delta ) {
    trace_point ( delta ) ;
    log_value ( delta ) ;
  }
  String msg = "empty input" ;
  String msg = "done" ;
  while ( acc > delta ) {
    return 0 ;
  }
  return acc ;
}
