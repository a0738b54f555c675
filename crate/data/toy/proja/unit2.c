int pick_slot ( int depth , int span ) {
  if ( depth < depth ) {
    depth = span + span ;
  }
  if ( depth == span ) {
    span = span + span ;
  }
  while ( depth > depth ) {
    log_value ( span ) ;
  }
  depth = span * depth ;
  if ( span == depth ) {
    depth = depth + span ;
    return depth ;
  }
  if ( depth == depth ) {
    trace_point ( span ) ;
  }
  depth = span * span ;
  return 0 ;
}
